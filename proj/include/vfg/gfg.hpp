#pragma once

#include <string>

#include "json.hpp"

#include "gog.hpp"

/**
 * @file gfg.hpp
 * @brief The GFG text format for graphs of groups (JSON based).
 *
 * {"version": "gfg-1",
 *  "vertices": [{"id": "a", "group": {"degree": 3, "generators": [[1,2,0]]}}],
 *  "edges": [{"id": "e", "group": {...}, "from": "a", "to": "b",
 *             "map_from": [..], "map_to": [..]}]}
 *
 * map_from / map_to list the element indices of the images of the edge
 * group generators inside the vertex group.
 */

namespace vfg
{

inline constexpr char const *gfg_version = "gfg-1";

GroupPtr group_from_json(nlohmann::json const &j, std::string const &where = "group");
nlohmann::json group_to_json(FinGroup const &g);

GraphOfGroups gfg_from_json(nlohmann::json const &j);
nlohmann::json gfg_to_json(GraphOfGroups const &g);

GraphOfGroups parse_gfg(std::string const &text);
std::string serialize_gfg(GraphOfGroups const &g);

GraphOfGroups load_gfg(std::string const &path);
void save_gfg(GraphOfGroups const &g, std::string const &path);

// word maps by small generator images, letter images and the base connector
nlohmann::json wordhom_to_json(WordHom const &h);
WordHom wordhom_from_json(GraphOfGroups const &src, GraphOfGroups const &dst,
                          nlohmann::json const &j);

// DOT rendering with |G_v| and |G_e| as labels
std::string export_dot(GraphOfGroups const &g);

} // namespace vfg

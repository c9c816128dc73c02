#pragma once

#include <string>

#include "json.hpp"

#include "gog.hpp"

/**
 * @file report.hpp
 * @brief JSON reports shared by the command line tool, the Python module
 *        and the corpus fixtures. Key order is sorted, so dumping a report
 *        gives the same bytes on every run.
 */

namespace vfg
{

// sizes of the graph and of its reduction
nlohmann::json validation_report(GraphOfGroups const &g);

// invariants and the per-class data of reduce(g)
nlohmann::json analysis_report(GraphOfGroups const &g);

// normal form, identity test and translation length of a word
nlohmann::json word_report(GraphOfGroups const &g, Path const &w);

// cylinders of the reduced graph; throws MixedEdgeOrders
nlohmann::json cylinders_report(GraphOfGroups const &g);

// the one-step legal extensions of g; kind is "large", "small" or "all"
nlohmann::json extensions_report(GraphOfGroups const &g, std::string const &kind);

// two-space indentation and a trailing newline
std::string dump(nlohmann::json const &j);

} // namespace vfg

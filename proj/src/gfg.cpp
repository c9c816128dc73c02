#include <fstream>
#include <sstream>

#include "vfg/gfg.hpp"

using nlohmann::json;

namespace vfg
{

namespace
{

json const &field(json const &j, char const *key, std::string const &where)
{
  if (!j.is_object() || !j.contains(key))
    throw ParseError(where + ": missing field '" + key + "'");
  return j.at(key);
}

std::string string_field(json const &j, char const *key, std::string const &where)
{
  auto const &f = field(j, key, where);
  if (!f.is_string())
    throw ParseError(where + "." + key + ": expected a string");
  return f.get<std::string>();
}

std::vector<int> int_list(json const &j, std::string const &where)
{
  if (!j.is_array())
    throw ParseError(where + ": expected an array of integers");
  std::vector<int> res;
  for (auto const &x : j) {
    if (!x.is_number_integer())
      throw ParseError(where + ": expected an array of integers");
    res.push_back(x.get<int>());
  }
  return res;
}

} // namespace

GroupPtr group_from_json(json const &j, std::string const &where)
{
  auto const &deg = field(j, "degree", where);
  if (!deg.is_number_integer() || deg.get<int>() < 1)
    throw ParseError(where + ".degree: expected a positive integer");
  int degree = deg.get<int>();

  auto const &gens = field(j, "generators", where);
  if (!gens.is_array())
    throw ParseError(where + ".generators: expected an array");

  std::vector<Perm> perms;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::string w = where + ".generators[" + std::to_string(i) + "]";
    auto images = int_list(gens[i], w);
    if (static_cast<int>(images.size()) != degree)
      throw ParseError(w + ": length differs from degree");
    try {
      perms.emplace_back(images);
    } catch (BadPerm const &) {
      throw ParseError(w + ": not a permutation");
    }
  }

  try {
    return make_group(degree, perms);
  } catch (CapExceeded const &e) {
    throw ParseError(where + ": " + e.what());
  }
}

json group_to_json(FinGroup const &g)
{
  json gens = json::array();
  for (auto const &p : g.generators())
    gens.push_back(p.images());
  return {{"degree", g.degree()}, {"generators", gens}};
}

GraphOfGroups gfg_from_json(json const &j)
{
  if (!j.is_object())
    throw ParseError("top level: expected an object");
  if (j.contains("version") && j.at("version") != gfg_version)
    throw ParseError("version: unsupported version tag");

  GraphOfGroups g;

  auto const &vs = field(j, "vertices", "top level");
  if (!vs.is_array())
    throw ParseError("vertices: expected an array");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    std::string w = "vertices[" + std::to_string(i) + "]";
    auto id = string_field(vs[i], "id", w);
    if (g.vertex_index(id) >= 0)
      throw ParseError(w + ".id: duplicate vertex id '" + id + "'");
    g.add_vertex(id, group_from_json(field(vs[i], "group", w), w + ".group"));
  }

  json empty = json::array();
  auto const &es = j.contains("edges") ? j.at("edges") : empty;
  if (!es.is_array())
    throw ParseError("edges: expected an array");
  for (std::size_t i = 0; i < es.size(); ++i) {
    std::string w = "edges[" + std::to_string(i) + "]";
    auto id = string_field(es[i], "id", w);
    auto group = group_from_json(field(es[i], "group", w), w + ".group");

    int from = g.vertex_index(string_field(es[i], "from", w));
    int to = g.vertex_index(string_field(es[i], "to", w));
    if (from < 0)
      throw ParseError(w + ".from: unknown vertex");
    if (to < 0)
      throw ParseError(w + ".to: unknown vertex");

    auto make_map = [&](char const *key, int v) {
      std::string wk = w + "." + key;
      auto images = int_list(field(es[i], key, w), wk);
      try {
        return GrpHom(group, g.vertex(v).group, images);
      } catch (BadHom const &e) {
        throw ParseError(wk + ": " + e.what());
      }
    };

    auto map_from = make_map("map_from", from);
    auto map_to = make_map("map_to", to);
    g.add_edge(id, group, from, to, map_from, map_to);
  }

  try {
    g.finalize();
  } catch (ValidationError const &e) {
    throw ParseError(e.what());
  }
  return g;
}

json gfg_to_json(GraphOfGroups const &g)
{
  json vs = json::array();
  for (auto const &v : g.vertices())
    vs.push_back({{"id", v.id}, {"group", group_to_json(*v.group)}});

  json es = json::array();
  for (auto const &e : g.edges()) {
    es.push_back({{"id", e.id},
                  {"group", group_to_json(*e.group)},
                  {"from", g.vertex(e.from).id},
                  {"to", g.vertex(e.to).id},
                  {"map_from", e.inj_from.gen_images()},
                  {"map_to", e.inj_to.gen_images()}});
  }

  return {{"version", gfg_version}, {"vertices", vs}, {"edges", es}};
}

GraphOfGroups parse_gfg(std::string const &text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (json::parse_error const &e) {
    throw ParseError(std::string("syntax: ") + e.what());
  }
  return gfg_from_json(j);
}

std::string serialize_gfg(GraphOfGroups const &g)
{ return gfg_to_json(g).dump(2) + "\n"; }

GraphOfGroups load_gfg(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
    throw ParseError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_gfg(ss.str());
  } catch (ParseError const &e) {
    throw ParseError(path + ": " + std::string(e.what()).substr(e.kind().size() + 2));
  }
}

void save_gfg(GraphOfGroups const &g, std::string const &path)
{
  std::ofstream out(path);
  if (!out)
    throw ParseError(path + ": cannot write");
  out << serialize_gfg(g);
}

nlohmann::json wordhom_to_json(WordHom const &h)
{
  auto const &src = h.source();
  auto const &dst = h.target();
  nlohmann::json vj = nlohmann::json::array();
  for (int v = 0; v < src.num_vertices(); ++v) {
    nlohmann::json gens = nlohmann::json::array();
    for (int s : src.vertex(v).group->small_generators())
      gens.push_back(dst.format(h.velt[v][s]));
    vj.push_back({{"vertex", src.vertex(v).id},
                  {"image", dst.vertex(h.vmap[v]).id},
                  {"generators", gens}});
  }
  nlohmann::json ej = nlohmann::json::object();
  for (int e = 0; e < src.num_edges(); ++e)
    ej[src.edge(e).id] = dst.format(h.edge_plus[e]);
  return {{"vertices", vj}, {"edges", ej}, {"base", dst.format(h.base_conn)}};
}

WordHom wordhom_from_json(GraphOfGroups const &src, GraphOfGroups const &dst,
                          nlohmann::json const &j)
{
  try {
    WordHom h(src, dst);
    for (auto const &vj : j.at("vertices")) {
      int v = src.vertex_index(vj.at("vertex").get<std::string>());
      int w = dst.vertex_index(vj.at("image").get<std::string>());
      std::vector<Path> gens;
      for (auto const &p : vj.at("generators"))
        gens.push_back(dst.parse(p.get<std::string>(), w));
      h.set_vertex_images(v, w, gens);
    }
    for (int e = 0; e < src.num_edges(); ++e) {
      auto const &edge = src.edge(e);
      h.edge_plus[e] = dst.parse(j.at("edges").at(edge.id).get<std::string>(),
                                 h.vmap[edge.to]);
    }
    h.base_conn = dst.parse(j.at("base").get<std::string>(), dst.base());
    return h;
  } catch (nlohmann::json::exception const &ex) {
    throw ParseError(std::string("word map: ") + ex.what());
  }
}

std::string export_dot(GraphOfGroups const &g)
{
  std::ostringstream os;
  os << "graph G {\n";
  for (auto const &v : g.vertices())
    os << "  \"" << v.id << "\" [label=\"" << v.group->order() << "\"];\n";
  for (auto const &e : g.edges()) {
    os << "  \"" << g.vertex(e.from).id << "\" -- \"" << g.vertex(e.to).id
       << "\" [label=\"" << e.group->order() << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

} // namespace vfg

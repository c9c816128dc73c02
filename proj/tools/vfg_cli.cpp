// vfg: command line front end for graphs of finite groups.
//
// Exit codes: 0 success or decided verdict, 1 rejected certificate or
// runtime failure, 2 input error, 3 Unknown.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "vfg/cylinders.hpp"
#include "vfg/decide.hpp"
#include "vfg/formulas.hpp"
#include "vfg/gfg.hpp"
#include "vfg/report.hpp"

using namespace vfg;

namespace
{

constexpr int exit_rejected = 1;
constexpr int exit_input = 2;
constexpr int exit_unknown = 3;

std::string read_file(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
    throw ParseError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(std::string const &path, std::string const &text)
{
  std::ofstream out(path);
  if (!out)
    throw Error("IOError", path + ": cannot write");
  out << text;
}

nlohmann::json read_json(std::string const &path)
{
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (nlohmann::json::exception const &ex) {
    throw ParseError(path + ": " + ex.what());
  }
}

int verdict_code(Verdict v)
{ return v == Verdict::Unknown ? exit_unknown : 0; }

Emission::Which emission_kind(std::string const &s)
{
  static std::map<std::string, Emission::Which> const kinds = {
      {"special", Emission::Which::SpecialForall},
      {"special-n", Emission::Which::SpecialForallN},
      {"chain", Emission::Which::ChainExists},
      {"prestrong", Emission::Which::PreStrongExists},
      {"zeta", Emission::Which::Zeta},
      {"theta", Emission::Which::ThetaInvariant}};
  return kinds.at(s);
}

int emit_command(std::string const &graph, Emission const &e, std::string const &out)
{
  auto f = emit(load_gfg(graph), e);
  auto text = serialize(f.formula) + "\n";
  nlohmann::json rep = {{"symbols", symbol_count(f.formula)},
                        {"parameters", f.parameters},
                        {"approximate", f.approximate},
                        {"warning", f.warning}};
  if (out.empty()) {
    std::cout << text;
    std::cerr << dump(rep);
  } else {
    write_file(out, text);
    rep["output"] = out;
    std::cout << dump(rep);
  }
  return 0;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Graphs of finite groups: analysis, legal extensions and the "
               "forall-exists equivalence test"};
  app.require_subcommand(1);

  std::string g1, g2, out, text, equal, kind = "all", which = "zeta";
  std::string formula, group, cert_out, witness_out;
  std::vector<std::string> assign;
  int depth = 3, n = 0, idx = 1, K = 0, start = -1;
  std::size_t chain_budget = 500, iso_budget = default_iso_budget;
  std::size_t eval_budget = default_eval_budget;
  bool dot = false, strict = false;

  auto *validate = app.add_subcommand("validate", "parse and validate a graph");
  validate->add_option("graph", g1)->required();

  auto *analyze_cmd = app.add_subcommand("analyze", "invariants and finite subgroup classes");
  analyze_cmd->add_option("graph", g1)->required();

  auto *word = app.add_subcommand("word", "normal form of a word");
  word->add_option("graph", g1)->required();
  word->add_option("word", text, "tokens v<id>:<x> and e<id>:+/-, or 1")->required();
  word->add_option("--start", start, "vertex index where the path starts");
  word->add_option("--equal", equal, "compare with a second word");

  auto *ext = app.add_subcommand("extensions", "one-step legal extensions");
  ext->add_option("graph", g1)->required();
  ext->add_option("--kind", kind)->check(CLI::IsMember({"large", "small", "all"}));

  auto *iso = app.add_subcommand("isomorphic", "isomorphism test by slide search");
  iso->add_option("first", g1)->required();
  iso->add_option("second", g2)->required();
  iso->add_option("--budget", iso_budget, "slide search states");
  iso->add_option("--witness", witness_out, "write the witness JSON here");

  auto *dec = app.add_subcommand("decide", "forall-exists equivalence");
  dec->add_option("first", g1)->required();
  dec->add_option("second", g2)->required();
  dec->add_option("--depth", depth, "maximal chain length")->check(CLI::NonNegativeNumber);
  dec->add_option("--budget", chain_budget, "chains per side and depth");
  dec->add_option("--iso-budget", iso_budget, "slide search states per pair");
  dec->add_option("--cert", cert_out, "write the certificate here");

  auto *verify = app.add_subcommand("verify-cert", "check a certificate on its own");
  verify->add_option("certificate", g1)->required();

  auto *cyl = app.add_subcommand("cylinders", "tree of cylinders of the reduced graph");
  cyl->add_option("graph", g1)->required();
  cyl->add_flag("--dot", dot, "DOT output instead of JSON");

  auto *zeta = app.add_subcommand("zeta", "emit the sentence of a graph");
  zeta->add_option("graph", g1)->required();
  zeta->add_option("-o,--output", out);
  zeta->add_flag("--strict", strict, "fail on uncertified chains");

  auto *emit_cmd = app.add_subcommand("emit", "emit one of the auxiliary formulas");
  emit_cmd->add_option("graph", g1)->required();
  emit_cmd->add_option("--which", which)
      ->check(CLI::IsMember({"special", "special-n", "chain", "prestrong", "zeta", "theta"}));
  emit_cmd->add_option("-n", n, "radius, chain length or theta count");
  emit_cmd->add_option("-i", idx, "theta index");
  emit_cmd->add_option("-K", K, "chain K, 0 for the graph's");
  emit_cmd->add_option("-o,--output", out);
  emit_cmd->add_flag("--strict", strict);

  auto *eval = app.add_subcommand("eval-finite", "evaluate a formula in a finite group");
  eval->add_option("formula", formula)->required();
  eval->add_option("group", group, "group JSON {degree, generators}")->required();
  eval->add_option("--assign", assign, "name=element index for free names");
  eval->add_option("--budget", eval_budget);

  auto *dot_cmd = app.add_subcommand("export-dot", "DOT rendering of a graph");
  dot_cmd->add_option("graph", g1)->required();

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : exit_input;
  }

  try {
    if (*validate) {
      std::cout << dump(validation_report(load_gfg(g1)));
      return 0;
    }
    if (*analyze_cmd) {
      std::cout << dump(analysis_report(load_gfg(g1)));
      return 0;
    }
    if (*word) {
      auto g = load_gfg(g1);
      auto w = g.parse(text, start);
      auto rep = word_report(g, w);
      if (!equal.empty())
        rep["equal"] = g.equal(w, g.parse(equal, start));
      std::cout << dump(rep);
      return 0;
    }
    if (*ext) {
      std::cout << dump(extensions_report(load_gfg(g1), kind));
      return 0;
    }
    if (*iso) {
      auto a = load_gfg(g1), b = load_gfg(g2);
      auto r = group_isomorphic(a, b, iso_budget);
      nlohmann::json rep = {{"provenance", r.provenance}, {"explored", r.explored}};
      rep["witness"] = nullptr;
      if (r.witness && !witness_out.empty()) {
        write_file(witness_out, dump(witness_to_json(a, b, *r.witness)));
        rep["witness"] = witness_out;
      }
      std::cout << to_string(r.verdict) << "\n" << dump(rep);
      return verdict_code(r.verdict);
    }
    if (*dec) {
      auto a = load_gfg(g1), b = load_gfg(g2);
      DecideConfig c;
      c.depth = depth;
      c.chain_budget = chain_budget;
      c.iso_budget = iso_budget;
      auto r = decide(a, b, c);
      auto rep = r.report();
      if (r.certificate) {
        if (cert_out.empty()) {
          rep["certificate"] = {{"chain1", r.certificate->chain1.to_json()["steps"]},
                                {"chain2", r.certificate->chain2.to_json()["steps"]}};
        } else {
          write_file(cert_out, dump(r.certificate->to_json()));
          rep["certificate"] = cert_out;
        }
      }
      std::cout << to_string(r.verdict) << "\n" << dump(rep);
      return verdict_code(r.verdict);
    }
    if (*verify) {
      auto cert = Certificate::from_json(read_json(g1));
      auto why = verify_certificate(cert);
      if (why.empty()) {
        std::cout << "OK\n";
        return 0;
      }
      std::cout << "REJECTED\n" << why << "\n";
      return exit_rejected;
    }
    if (*cyl) {
      auto g = load_gfg(g1);
      if (dot)
        std::cout << export_dot(reduce(g), tree_of_cylinders(reduce(g)));
      else
        std::cout << dump(cylinders_report(g));
      return 0;
    }
    if (*zeta) {
      Emission e;
      e.which = Emission::Which::Zeta;
      e.strict = strict;
      return emit_command(g1, e, out);
    }
    if (*emit_cmd) {
      Emission e;
      e.which = emission_kind(which);
      e.n = n;
      e.i = idx;
      e.K = K;
      e.strict = strict;
      return emit_command(g1, e, out);
    }
    if (*eval) {
      auto f = parse_formula(read_file(formula));
      auto h = group_from_json(read_json(group), group);
      std::map<std::string, int> given;
      for (auto const &a : assign) {
        auto eq = a.find('=');
        if (eq == std::string::npos)
          throw ParseError("--assign " + a + ": expected name=index");
        int x = 0;
        try {
          x = std::stoi(a.substr(eq + 1));
        } catch (std::exception const &) {
          throw ParseError("--assign " + a + ": bad index");
        }
        if (x < 0 || x >= h->order())
          throw ParseError("--assign " + a + ": index out of range");
        given[a.substr(0, eq)] = x;
      }
      std::cout << (evaluate_finite(f, *h, given, eval_budget) ? "true" : "false") << "\n";
      return 0;
    }
    if (*dot_cmd) {
      std::cout << export_dot(load_gfg(g1));
      return 0;
    }
  } catch (Error const &e) {
    std::cerr << "error: " << e.what() << "\n";
    static std::set<std::string> const input_errors = {
        "ParseError", "ValidationError", "MalformedWord", "BadPerm", "BadHom"};
    return input_errors.count(e.kind()) ? exit_input : exit_rejected;
  } catch (std::exception const &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_rejected;
  }
  return 0;
}

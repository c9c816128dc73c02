#include <algorithm>

#include "vfg/decide.hpp"
#include "vfg/gfg.hpp"
#include "vfg/splittings.hpp"

namespace vfg
{

namespace
{

nlohmann::json steps_json(std::vector<LegalStep> const &steps)
{
  auto j = nlohmann::json::array();
  for (auto const &s : steps)
    j.push_back(s.to_json());
  return j;
}

std::vector<LegalStep> next_steps(GraphOfGroups const &g)
{
  std::vector<LegalStep> res;
  try {
    for (auto const &s : legal_large_candidates(g))
      res.push_back({s, std::nullopt});
  } catch (ElementaryGroup const &) {
  }
  for (auto &s : legal_small_candidates(g))
    res.push_back({std::nullopt, std::move(s)});
  return res;
}

} // namespace

nlohmann::json ExtensionChain::to_json() const
{ return {{"base", gfg_to_json(base)}, {"steps", steps_json(steps)}, {"result", gfg_to_json(result)}}; }

ExtensionChain ExtensionChain::from_json(nlohmann::json const &j)
{
  try {
    ExtensionChain c;
    c.base = gfg_from_json(j.at("base"));
    for (auto const &s : j.at("steps"))
      c.steps.push_back(LegalStep::from_json(s));
    c.result = gfg_from_json(j.at("result"));
    return c;
  } catch (nlohmann::json::exception const &ex) {
    throw ParseError(std::string("chain: ") + ex.what());
  }
}

std::optional<InvariantMismatch> quick_refute(GraphOfGroups const &g1, GraphOfGroups const &g2)
{
  auto a = invariants(reduce(g1));
  auto b = invariants(reduce(g2));
  auto which = invariant_mismatch(a, b);
  if (which.empty())
    return std::nullopt;
  return InvariantMismatch{which, a, b};
}

std::string Bound::formula() const
{
  return std::to_string(N) + "*(" + std::to_string(R) + "+" + std::to_string(o) + "!)+" +
         std::to_string(N);
}

Bound compute_bound(GraphOfGroups const &g1, GraphOfGroups const &g2)
{
  Bound b;
  for (auto const *g : {&g1, &g2}) {
    auto an = analyze(reduce(*g));
    b.N = std::max(b.N, static_cast<int>(an.classes.size()));
    for (auto const &ca : an.classes) {
      b.o = std::max(b.o, ca.cls.order);
      b.R = std::max(b.R, static_cast<int>(ca.normalizer.generators.size()));
    }
  }
  b.value = BigInt(b.N) * (BigInt(b.R) + factorial(b.o)) + b.N;
  return b;
}

Enumeration enumerate_extensions(GraphOfGroups const &g, int depth, std::size_t budget)
{
  Enumeration en;
  auto red = reduce(g);
  IsoStore seen;
  seen.insert(red);
  en.chains.push_back({g, {}, g});

  std::size_t level_begin = 0;
  for (int d = 0; d < depth && !en.truncated; ++d) {
    std::size_t level_end = en.chains.size();
    for (std::size_t i = level_begin; i < level_end && !en.truncated; ++i) {
      auto current = en.chains[i];
      for (auto const &step : next_steps(current.result)) {
        GraphOfGroups next;
        try {
          next = apply_legal(current.result, step);
        } catch (IllegalStep const &) {
          continue;
        }
        if (!seen.insert(reduce(next)).second)
          continue;
        if (en.chains.size() >= budget) {
          en.truncated = true;
          break;
        }
        auto chain = current;
        chain.steps.push_back(step);
        chain.result = std::move(next);
        en.chains.push_back(std::move(chain));
      }
    }
    level_begin = level_end;
    en.depth = d + 1;
  }
  return en;
}

nlohmann::json Certificate::to_json() const
{
  return {{"version", "vfg-cert-1"},
          {"chain1", chain1.to_json()},
          {"chain2", chain2.to_json()},
          {"iso", witness_to_json(chain1.result, chain2.result, iso)}};
}

Certificate Certificate::from_json(nlohmann::json const &j)
{
  try {
    if (j.at("version") != "vfg-cert-1")
      throw ParseError("certificate: unknown version");
    Certificate c;
    c.chain1 = ExtensionChain::from_json(j.at("chain1"));
    c.chain2 = ExtensionChain::from_json(j.at("chain2"));
    c.iso = witness_from_json(c.chain1.result, c.chain2.result, j.at("iso"));
    return c;
  } catch (nlohmann::json::exception const &ex) {
    throw ParseError(std::string("certificate: ") + ex.what());
  }
}

std::string verify_certificate(Certificate const &cert)
{
  int which = 1;
  for (auto const *chain : {&cert.chain1, &cert.chain2}) {
    std::string name = "chain " + std::to_string(which++);
    auto current = chain->base;
    for (std::size_t i = 0; i < chain->steps.size(); ++i) {
      std::string at = name + " step " + std::to_string(i + 1) + ": ";
      try {
        current = apply_legal(current, chain->steps[i]);
      } catch (Error const &ex) {
        return at + ex.what();
      }
    }
    if (serialize_gfg(current) != serialize_gfg(chain->result))
      return name + " result: does not match the recomputed extension";
  }
  std::string r;
  try {
    r = check_iso_witness(cert.chain1.result, cert.chain2.result, cert.iso);
  } catch (Error const &ex) {
    r = ex.what();
  }
  if (!r.empty())
    return "isomorphism: " + r;
  return "";
}

nlohmann::json DecideResult::report() const
{
  nlohmann::json j;
  j["verdict"] = to_string(verdict);
  if (mismatch) {
    j["reason"] = "InvariantMismatch";
    j["which"] = mismatch->which;
  } else if (no_reason == NoReason::ExhaustedWithinBound) {
    j["reason"] = "ExhaustedWithinBound";
  }
  if (certificate)
    j["chains"] = {certificate->chain1.length(), certificate->chain2.length()};
  j["bound"] = {{"N", bound.N},
                {"R", bound.R},
                {"o", bound.o},
                {"formula", bound.formula()},
                {"value", bound.value.str()}};
  j["explored_depth"] = explored_depth;
  j["extensions"] = {chains1, chains2};
  j["iso_checks"] = iso_checks;
  j["iso_unknown"] = iso_unknown;
  j["truncated"] = truncated;
  return j;
}

DecideResult decide(GraphOfGroups const &g1, GraphOfGroups const &g2, DecideConfig const &config)
{
  DecideResult res;
  res.bound = compute_bound(g1, g2);
  res.mismatch = quick_refute(g1, g2);
  if (res.mismatch) {
    res.verdict = Verdict::No;
    res.no_reason = NoReason::InvariantMismatch;
    return res;
  }

  Enumeration e1{{{g1, {}, g1}}, false, 0}, e2{{{g2, {}, g2}}, false, 0};
  auto level = [](Enumeration const &e, std::size_t len) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < e.chains.size(); ++i)
      if (e.chains[i].length() == len)
        idx.push_back(i);
    return idx;
  };

  for (int d = 0; d <= config.depth; ++d) {
    if (d > 0) {
      e1 = enumerate_extensions(g1, d, config.chain_budget);
      e2 = enumerate_extensions(g2, d, config.chain_budget);
    }
    res.explored_depth = d;
    res.chains1 = e1.chains.size();
    res.chains2 = e2.chains.size();
    res.truncated = e1.truncated || e2.truncated;

    // new pairs have a chain of length d; shorter totals first, then the
    // longer chain on the first side
    std::vector<std::pair<int, int>> lengths;
    for (int i = 0; i <= d; ++i) {
      lengths.emplace_back(i, d);
      if (i != d)
        lengths.emplace_back(d, i);
    }
    std::stable_sort(lengths.begin(), lengths.end(), [](auto const &a, auto const &b) {
      if (a.first + a.second != b.first + b.second)
        return a.first + a.second < b.first + b.second;
      return a.first > b.first;
    });

    for (auto [i, j] : lengths) {
      for (auto a : level(e1, i)) {
        for (auto b : level(e2, j)) {
          auto const &c1 = e1.chains[a];
          auto const &c2 = e2.chains[b];
          ++res.iso_checks;
          auto r = group_isomorphic(c1.result, c2.result, config.iso_budget);
          if (r.verdict == Verdict::Unknown)
            ++res.iso_unknown;
          if (r.verdict != Verdict::Yes)
            continue;
          res.verdict = Verdict::Yes;
          res.certificate = Certificate{c1, c2, *r.witness};
          return res;
        }
      }
    }
  }

  // a sound No needs every chain shorter than the bound and every pair refuted
  bool complete = !res.truncated && res.iso_unknown == 0 && BigInt(config.depth) >= res.bound.value;
  if (complete) {
    res.verdict = Verdict::No;
    res.no_reason = NoReason::ExhaustedWithinBound;
  }
  return res;
}

} // namespace vfg

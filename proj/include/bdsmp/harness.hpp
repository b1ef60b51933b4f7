#pragma once

// Command implementations behind the bdsmp CLI: model descriptors, CSV output,
// and the figure-reproduction bundle.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdsmp/builders.hpp"
#include "bdsmp/diffusion.hpp"
#include "bdsmp/error.hpp"
#include "bdsmp/model.hpp"
#include "bdsmp/reduction.hpp"
#include "bdsmp/simulate.hpp"
#include "bdsmp/stationary.hpp"

namespace bdsmp {

inline constexpr const char* version = "0.1.0";

using json = nlohmann::json;

inline json laurent_to_json(const Laurent& x) { return json{{"h", x.h()}, {"coeffs", x.coeffs()}}; }

inline Laurent laurent_from_json(const json& j) {
  return Laurent(j.at("h").get<int>(), j.at("coeffs").get<std::vector<double>>());
}

inline json intensity_to_json(const IntensityModel& m) {
  json gp = json::array(), gm = json::array();
  for (int i = 0; i <= m.N; ++i) {
    gp.push_back({m.g_plus[static_cast<std::size_t>(i)].g0, m.g_plus[static_cast<std::size_t>(i)].g1});
    gm.push_back({m.g_minus[static_cast<std::size_t>(i)].g0, m.g_minus[static_cast<std::size_t>(i)].g1});
  }
  return json{{"N", m.N}, {"sojourn_family", family_name(m.family)}, {"g_plus", gp}, {"g_minus", gm}, {"eps0", m.eps0}};
}

// A model as loaded from a preset or descriptor: either linear intensities
// (expanded to any requested length) or fixed expansion data.
struct LoadedModel {
  std::string label;
  json descriptor;
  std::optional<IntensityModel> intensities;
  std::optional<BirthDeathSMP> fixed;

  BirthDeathSMP build(int L) const { return intensities ? from_linear_intensities(*intensities, L) : *fixed; }
  double eps0() const { return intensities ? intensities->eps0 : fixed->eps0; }

  // FNV-1a over the canonical descriptor text.
  std::string hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : descriptor.dump()) {
      h ^= ch;
      h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
  }
};

inline LoadedModel model_from_json(const json& j, const std::string& label = "descriptor") {
  try {
    LoadedModel lm;
    lm.label = label;
    const int N = j.at("N").get<int>();
    if (j.contains("pairs")) {
      std::vector<TransitionPair> pairs;
      for (const auto& p : j.at("pairs"))
        pairs.push_back(make_pair(laurent_from_json(p.at("p_minus")), laurent_from_json(p.at("p_plus")),
                                  laurent_from_json(p.at("e_minus")), laurent_from_json(p.at("e_plus"))));
      BirthDeathSMP m = from_expansions(N, std::move(pairs));
      m.eps0 = j.value("eps0", 1.0);
      lm.fixed = std::move(m);
      lm.descriptor = j;
      return lm;
    }
    IntensityModel m;
    m.N = N;
    const std::string fam = j.value("sojourn_family", std::string("exponential"));
    if (fam == "geometric")
      m.family = SojournFamily::geometric;
    else if (fam == "exponential")
      m.family = SojournFamily::exponential;
    else
      fail(Errc::invalid_argument, "unknown sojourn_family '" + fam + "'");
    for (const auto& g : j.at("g_plus")) m.g_plus.push_back({g.at(0).get<double>(), g.at(1).get<double>()});
    for (const auto& g : j.at("g_minus")) m.g_minus.push_back({g.at(0).get<double>(), g.at(1).get<double>()});
    if (m.g_plus.size() != static_cast<std::size_t>(N + 1) || m.g_minus.size() != static_cast<std::size_t>(N + 1))
      fail(Errc::length_mismatch, "g_plus and g_minus need N+1 entries");
    m.eps0 = admissible_eps0(m, j.value("eps0", 1.0));
    if (!(m.eps0 > 0.0)) fail(Errc::invariant_violation, "no admissible perturbation range");
    validate(m);
    lm.intensities = m;
    lm.descriptor = intensity_to_json(m);
    return lm;
  } catch (const json::exception& e) {
    fail(Errc::invalid_argument, std::string("malformed model descriptor: ") + e.what());
  }
}

inline LoadedModel load_preset(const std::string& name) {
  LoadedModel lm = model_from_json(intensity_to_json(preset_model(name)), name);
  return lm;
}

inline LoadedModel load_descriptor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open model descriptor '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(Errc::invalid_argument, std::string("cannot parse '") + path + "': " + e.what());
  }
  return model_from_json(j, path);
}

inline std::string num(double x) {
  if (std::isnan(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void provenance(std::ostream& os, const LoadedModel& m, const std::string& command) {
  os << "# model=" << m.hash() << " label=" << m.label << " command=" << command << " version=" << version << "\n";
}

struct RunConfig {
  std::string model;   // path to JSON descriptor
  std::string preset;  // or preset name
  std::string command = "expand";
  int L = 2;
  std::vector<double> eps;
  std::optional<std::vector<int>> states;
  std::string out;
  std::uint64_t seed = 1;
  double horizon = 1e5;
  int reps = 1000;
  std::string kind = "auto";  // stationary | quasi | auto
};

inline LoadedModel load_model(const RunConfig& cfg) {
  if (!cfg.model.empty() && !cfg.preset.empty()) fail(Errc::invalid_argument, "give either --model or --preset, not both");
  if (!cfg.model.empty()) return load_descriptor_file(cfg.model);
  if (!cfg.preset.empty()) return load_preset(cfg.preset);
  fail(Errc::invalid_argument, "no model given (use --model or --preset)");
}

namespace detail {

inline bool wanted(const RunConfig& cfg, int i) {
  if (!cfg.states) return true;
  for (int s : *cfg.states)
    if (s == i) return true;
  return false;
}

inline void check_eps(const RunConfig& cfg, const LoadedModel& m) {
  if (cfg.eps.empty()) fail(Errc::invalid_argument, "command needs --eps");
  for (double e : cfg.eps)
    if (!(e > 0.0) || e > m.eps0()) fail(Errc::invalid_argument, "eps " + num(e) + " outside (0, " + num(m.eps0()) + "]");
}

inline bool use_quasi(const RunConfig& cfg, const BirthDeathSMP& m) {
  if (cfg.kind == "stationary") return false;
  if (cfg.kind == "quasi") {
    if (m.scenario.tag == ScenarioTag::H1) fail(Errc::wrong_scenario, "no quasi-stationary distribution under H1");
    return true;
  }
  if (cfg.kind != "auto") fail(Errc::invalid_argument, "unknown --kind '" + cfg.kind + "'");
  return m.scenario.tag != ScenarioTag::H1;
}

}  // namespace detail

inline void cmd_expand(const RunConfig& cfg, std::ostream& os) {
  if (cfg.L < 0) fail(Errc::invalid_argument, "L must be nonnegative");
  const LoadedModel lm = load_model(cfg);
  const BirthDeathSMP m = lm.build(cfg.L);
  std::vector<DistributionExpansion> parts{stationary_expansion(m, cfg.L)};
  if (m.scenario.tag != ScenarioTag::H1) parts.push_back(conditional_quasi_stationary_expansion(m, cfg.L));
  provenance(os, lm, "expand");
  os << "state,kind,shift";
  for (int l = 0; l <= cfg.L; ++l) os << ",coeff_" << l;
  os << ",guaranteed_k\n";
  for (const auto& d : parts)
    for (const auto& [i, x] : d.per_state) {
      if (!detail::wanted(cfg, i)) continue;
      os << i << ',' << kind_name(d.kind) << ',' << d.shifts.at(i);
      for (double c : x.coeffs()) os << ',' << num(c);
      os << ',' << x.k() << '\n';
    }
}

inline void cmd_exact(const RunConfig& cfg, std::ostream& os) {
  const LoadedModel lm = load_model(cfg);
  detail::check_eps(cfg, lm);
  const BirthDeathSMP m = lm.build(0);
  provenance(os, lm, "exact");
  os << "state,eps,pi,quasi\n";
  for (double e : cfg.eps) {
    const ExactResult r = exact_distributions(m, e);
    for (const auto& [i, p] : r.stationary.per_state) {
      if (!detail::wanted(cfg, i)) continue;
      os << i << ',' << num(e) << ',' << num(p) << ',';
      if (r.quasi && r.quasi->per_state.count(i)) os << num(r.quasi->per_state.at(i));
      os << '\n';
    }
  }
}

inline void cmd_compare(const RunConfig& cfg, std::ostream& os) {
  if (cfg.L < 0) fail(Errc::invalid_argument, "L must be nonnegative");
  const LoadedModel lm = load_model(cfg);
  detail::check_eps(cfg, lm);
  const BirthDeathSMP m = lm.build(cfg.L);
  const bool quasi = detail::use_quasi(cfg, m);
  const DistributionExpansion d = quasi ? conditional_quasi_stationary_expansion(m, cfg.L) : stationary_expansion(m, cfg.L);
  provenance(os, lm, std::string("compare kind=") + kind_name(d.kind) + " L=" + std::to_string(cfg.L));
  os << "state,eps,exact,truncated_L,abs_error,error_over_epsL\n";
  for (double e : cfg.eps) {
    const ExactResult r = exact_distributions(m, e);
    const ExactDistribution& ex = quasi ? *r.quasi : r.stationary;
    for (const auto& [i, x] : d.per_state) {
      if (!detail::wanted(cfg, i)) continue;
      const double exact = ex.per_state.at(i), approx = x.evaluate(e), err = std::abs(exact - approx);
      os << i << ',' << num(e) << ',' << num(exact) << ',' << num(approx) << ',' << num(err) << ','
         << num(err / std::pow(e, cfg.L + d.shifts.at(i))) << '\n';
    }
  }
}

inline void cmd_simulate(const RunConfig& cfg, std::ostream& os) {
  const LoadedModel lm = load_model(cfg);
  detail::check_eps(cfg, lm);
  if (!lm.intensities) fail(Errc::invalid_argument, "simulation needs an intensity descriptor");
  const double e = cfg.eps.front();
  const BirthDeathSMP m = lm.build(0);
  const SimulationResult r = simulate_path(*lm.intensities, e, cfg.horizon, cfg.seed);
  const ExactResult ex = exact_distributions(m, e);
  const NumericChain c = evaluate_at(m, e).chain;
  provenance(os, lm, "simulate seed=" + std::to_string(cfg.seed) + " horizon=" + num(cfg.horizon) + " eps=" + num(e));
  os << "quantity,state,estimate,se,count,exact\n";
  for (int i = 0; i <= m.N; ++i) {
    if (!detail::wanted(cfg, i)) continue;
    const auto u = static_cast<std::size_t>(i);
    os << "occupation," << i << ',' << num(r.occupation[u]) << ',' << num(r.occupation_se[u]) << ",," << num(ex.stationary.per_state.at(i)) << '\n';
  }
  for (int i = 0; i <= m.N; ++i) {
    if (!detail::wanted(cfg, i)) continue;
    const Estimate& est = r.mean_return[static_cast<std::size_t>(i)];
    os << "mean_return," << i << ',' << num(est.count ? est.mean : NAN) << ',' << num(est.count ? est.se : NAN) << ','
       << est.count << ',' << num(return_time_numeric(c, i)) << '\n';
  }
  const Estimate& h = r.mean_hit_0_from_1;
  os << "hit_0_from_1,1," << num(h.count ? h.mean : NAN) << ',' << num(h.count ? h.se : NAN) << ',' << h.count << ','
     << num(expected_absorption_from_one(m, e)) << '\n';
}

// One CSV per figure panel.
struct Panel {
  std::string name;
  std::string preset;
  std::function<void(std::ostream&)> body;
};

namespace detail {

inline std::vector<double> grid(double hi, int n) {
  std::vector<double> g;
  for (int j = 1; j <= n; ++j) g.push_back(hi * j / n);
  return g;
}

inline double truncated(const Laurent& x, int L, double eps) { return x.truncate(x.h() + L).evaluate(eps); }

// Exact vs truncated expansions over all states at one eps.
inline void distribution_panel(std::ostream& os, const BirthDeathSMP& m, bool quasi, double eps, std::vector<int> Ls,
                               int from, int to) {
  const int top = *std::max_element(Ls.begin(), Ls.end());
  const auto d = quasi ? conditional_quasi_stationary_expansion(m, top) : stationary_expansion(m, top);
  const auto r = exact_distributions(m, eps);
  const auto& ex = quasi ? *r.quasi : r.stationary;
  os << "state,eps,exact";
  for (int L : Ls) os << ",L" << L;
  os << '\n';
  for (const auto& [i, x] : d.per_state) {
    if (i < from || i > to) continue;
    os << i << ',' << num(eps) << ',' << num(ex.per_state.at(i));
    for (int L : Ls) os << ',' << num(truncated(x, L, eps));
    os << '\n';
  }
}

// One state as a function of eps.
inline void state_panel(std::ostream& os, const BirthDeathSMP& m, bool quasi, int state, const std::vector<double>& eps,
                        std::vector<int> Ls, bool with_first_order = false) {
  const int top = *std::max_element(Ls.begin(), Ls.end());
  const auto d = quasi ? conditional_quasi_stationary_expansion(m, top) : stationary_expansion(m, top);
  const Laurent& x = d.per_state.at(state);
  os << "eps,exact";
  for (int L : Ls) os << ",L" << L;
  if (with_first_order) os << ",renewal_first_order";
  os << '\n';
  for (double e : eps) {
    const auto r = exact_distributions(m, e);
    os << num(e) << ',' << num((quasi ? *r.quasi : r.stationary).per_state.at(state));
    for (int L : Ls) os << ',' << num(truncated(x, L, e));
    if (with_first_order) os << ',' << num(boundary_occupancy_first_order(m, e));
    os << '\n';
  }
}

inline void limit_panel(std::ostream& os, const BirthDeathSMP& m) {
  const auto lim = limiting_conditional_quasi_stationary(m);
  const auto d = conditional_quasi_stationary_expansion(m, 0);
  os << "state,quasi_limit,coeff_0\n";
  for (const auto& [i, p] : lim) os << i << ',' << num(p) << ',' << num(d.per_state.at(i).at(0)) << '\n';
}

}  // namespace detail

inline std::vector<Panel> figure_panels(const std::string& figure) {
  auto model = [](const std::string& preset, int L) { return load_preset(preset).build(L); };
  std::vector<Panel> all;
  auto add = [&](const std::string& fig, Panel p) {
    if (figure == "all" || figure == fig) all.push_back(std::move(p));
  };
  add("fig1", {"fig1a", "fig1", [=](std::ostream& os) {
                 const auto d = stationary_expansion(model("fig1", 0), 0);
                 os << "state,pi_limit\n";
                 for (const auto& [i, x] : d.per_state) os << i << ',' << num(x.at(0)) << '\n';
               }});
  add("fig1", {"fig1b", "fig1", [=](std::ostream& os) { detail::distribution_panel(os, model("fig1", 1), false, 0.01, {1}, 0, 100); }});
  add("fig1", {"fig1c", "fig1", [=](std::ostream& os) { detail::distribution_panel(os, model("fig1", 2), false, 0.02, {1, 2}, 0, 100); }});
  add("fig1", {"fig1d", "fig1", [=](std::ostream& os) { detail::distribution_panel(os, model("fig1", 2), false, 0.03, {1, 2}, 0, 100); }});
  add("fig2", {"fig2a", "fig2", [=](std::ostream& os) { detail::state_panel(os, model("fig2", 3), false, 40, detail::grid(0.05, 50), {1, 2, 3}); }});
  add("fig2", {"fig2b", "fig2", [=](std::ostream& os) { detail::state_panel(os, model("fig2", 3), false, 80, detail::grid(0.05, 50), {1, 2, 3}); }});
  add("fig3", {"fig3a", "fig3", [=](std::ostream& os) { detail::distribution_panel(os, model("fig3", 2), true, 0.005, {1, 2}, 1, 99); }});
  add("fig3", {"fig3b", "fig3", [=](std::ostream& os) { detail::distribution_panel(os, model("fig3", 2), true, 0.005, {1, 2}, 1, 20); }});
  for (const char* p : {"fig4a", "fig4b", "fig4c", "fig4d"}) {
    const std::string name = p;
    add("fig4", {name, name, [=](std::ostream& os) { detail::limit_panel(os, model(name, 0)); }});
  }
  for (const char* p : {"fig5a", "fig5b"}) {
    const std::string name = p;
    add("fig5", {name, name, [=](std::ostream& os) { detail::limit_panel(os, model(name, 0)); }});
  }
  add("fig6", {"fig6a", "fig6", [=](std::ostream& os) { detail::distribution_panel(os, model("fig6", 2), true, 0.02, {1, 2}, 1, 100); }});
  add("fig6", {"fig6b", "fig6", [=](std::ostream& os) { detail::state_panel(os, model("fig6", 3), true, 10, detail::grid(0.05, 50), {1, 2, 3}); }});
  for (const char* p : {"fig7a", "fig7b"}) {
    const std::string name = p;
    add("fig7", {name, name, [=](std::ostream& os) {
                   const auto m = model(name, 3);
                   // eps range scaled to where pi_0 leaves 1: g1 eps E_10 ~ 3
                   const double e10 = expected_absorption_from_one(m, 1e-12);
                   const double hi = std::min(m.eps0, 3.0 / (m.source->g_plus[0].g1 * e10));
                   detail::state_panel(os, m, false, 0, detail::grid(hi, 50), {1, 2, 3}, true);
                 }});
  }
  if (all.empty()) fail(Errc::invalid_argument, "unknown figure '" + figure + "' (use fig1..fig7 or all)");
  return all;
}

// Runs panels concurrently; each file is written to a temporary name and renamed.
inline std::vector<std::string> cmd_reproduce(const RunConfig& cfg) {
  const std::string figure = cfg.preset.empty() ? "all" : cfg.preset;
  const std::filesystem::path dir = cfg.out.empty() ? "figures" : cfg.out;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(Errc::io_error, "cannot create output directory '" + dir.string() + "'");
  const auto panels = figure_panels(figure);
  std::vector<std::future<std::string>> jobs;
  for (const auto& p : panels)
    jobs.push_back(std::async(std::launch::async, [p, dir] {
      const auto path = dir / (p.name + ".csv");
      const auto tmp = dir / (p.name + ".csv.tmp");
      {
        std::ofstream os(tmp);
        if (!os) fail(Errc::io_error, "cannot write '" + tmp.string() + "'");
        provenance(os, load_preset(p.preset), "reproduce " + p.name);
        p.body(os);
        if (!os) fail(Errc::io_error, "write failed for '" + tmp.string() + "'");
      }
      std::filesystem::rename(tmp, path);
      return path.string();
    }));
  std::vector<std::string> written;
  for (auto& j : jobs) written.push_back(j.get());
  return written;
}

// Dispatch a non-reproduce command to a stream.
inline void run_command(const RunConfig& cfg, std::ostream& os) {
  if (cfg.command == "expand") return cmd_expand(cfg, os);
  if (cfg.command == "exact") return cmd_exact(cfg, os);
  if (cfg.command == "compare") return cmd_compare(cfg, os);
  if (cfg.command == "simulate") return cmd_simulate(cfg, os);
  fail(Errc::invalid_argument, "unknown command '" + cfg.command + "'");
}

}  // namespace bdsmp

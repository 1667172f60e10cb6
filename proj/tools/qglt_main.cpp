// qglt - negative spectra of Schrodinger operators on star graphs, with
// Lieb-Thirring ratio checks, sharpness sweeps and an extremal-potential
// search.  Exit codes: 0 success / checks passed, 2 check failed, 1 usage or
// input error.
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "qglt/io.hpp"
#include "qglt/lieb_thirring.hpp"
#include "qglt/operators.hpp"
#include "qglt/oracle.hpp"
#include "qglt/parallel.hpp"
#include "qglt/sampling.hpp"
#include "qglt/search.hpp"
#include "qglt/spectrum.hpp"
#include "qglt/symmetry.hpp"
#include "qglt/version.hpp"

using nlohmann::json;
using namespace qglt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;

struct CommonOpts {
  int edges = 0;  // 0 = infer from the potential file
  double gamma = 0.5;
  double h = 0.01;
  double len = 30.0;
  std::string far_bc = "dirichlet";
  std::string format = "json";
  unsigned jobs = 0;  // 0 = logical cores
  std::uint64_t seed = 0;
  double tol_eig = 1e-10;
  double tol_zero = 1e-10;
  std::string potential;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_potential = true) {
  cmd->set_help_flag("--help", "Print help");  // frees -h / --h for the grid step
  cmd->add_option("--edges", o.edges, "Number of star edges N (inferred from a field file)");
  cmd->add_option("--gamma", o.gamma, "Riesz-mean exponent")->capture_default_str();
  cmd->add_option("--h", o.h, "Grid step")->capture_default_str();
  cmd->add_option("--len", o.len, "Truncated edge length")->capture_default_str();
  cmd->add_option("--far-bc", o.far_bc, "Far boundary condition: dirichlet|neumann")
      ->capture_default_str();
  cmd->add_option("--format", o.format, "Output format: json|tsv")->capture_default_str();
  cmd->add_option("--jobs", o.jobs, "Worker threads (0 = logical cores)")->capture_default_str();
  cmd->add_option("--seed", o.seed, "RNG seed for randomized batches")->capture_default_str();
  cmd->add_option("--tol-eig", o.tol_eig, "Eigenvalue bisection tolerance")->capture_default_str();
  cmd->add_option("--tol-zero", o.tol_zero, "Near-zero cutoff (scaled by max |V|)")
      ->capture_default_str();
  if (with_potential)
    cmd->add_option("--potential", o.potential,
                    "Potential: JSON file path or inline JSON (profile array, "
                    "{neg,pos} line, or {n_edges,edges} field)");
}

GridSpec make_grid(const CommonOpts& o) {
  return GridSpec::from_length(o.h, o.len, far_bc_from_string(o.far_bc));
}

SolverOptions make_solver(const CommonOpts& o) {
  SolverOptions s;
  s.tol_eig = o.tol_eig;
  s.tol_zero = o.tol_zero;
  return s;
}

struct LoadedPotential {
  io::PotentialInput value;
  std::string source;  // file path or "<inline>"
  std::string content_digest;
};

LoadedPotential load_potential(const std::string& spec) {
  if (spec.empty())
    throw Error(Errc::invalid_argument, "--potential is required for this command");
  LoadedPotential lp;
  const bool inline_json = spec.front() == '[' || spec.front() == '{';
  if (inline_json) {
    lp.value = io::potential_from_json(spec);
    lp.source = "<inline>";
    lp.content_digest = io::digest(spec);
  } else {
    lp.value = io::potential_from_file(spec);
    lp.source = spec;
    lp.content_digest = io::digest_file(spec);
  }
  return lp;
}

PotentialField as_field(const io::PotentialInput& input, int edges) {
  if (const auto* f = std::get_if<PotentialField>(&input)) {
    if (edges > 0 && edges != f->graph.n_edges)
      throw Error(Errc::invalid_argument, "--edges disagrees with the field's n_edges");
    return *f;
  }
  if (const auto* p = std::get_if<EdgePotential>(&input)) {
    if (edges < 1)
      throw Error(Errc::invalid_argument, "--edges is required with a profile potential");
    return radial_field(StarGraph{edges}, *p);
  }
  const auto& line = std::get<LinePotential>(input);
  if (edges != 0 && edges != 2)
    throw Error(Errc::invalid_argument, "a line potential needs --edges 2");
  return PotentialField{StarGraph{2}, {line.neg, line.pos}};
}

EdgePotential as_profile(const io::PotentialInput& input) {
  if (const auto* p = std::get_if<EdgePotential>(&input)) return *p;
  if (const auto* f = std::get_if<PotentialField>(&input)) {
    if (!f->is_radial())
      throw Error(Errc::invalid_argument, "this check needs a radial field or a profile");
    return f->edge(0);
  }
  throw Error(Errc::invalid_argument, "this check needs a profile potential, not a line");
}

LinePotential as_line(const io::PotentialInput& input) {
  if (const auto* l = std::get_if<LinePotential>(&input)) return *l;
  if (const auto* p = std::get_if<EdgePotential>(&input)) return LinePotential{{}, *p};
  throw Error(Errc::invalid_argument, "this command needs a line potential or a profile");
}

io::Manifest make_manifest(const CLI::App& app, const CLI::App* cmd, const CommonOpts& o,
                           const LoadedPotential* lp) {
  io::Manifest m;
  m.command = cmd->get_name();
  for (const CLI::App* p = cmd->get_parent(); p != nullptr && p != &app; p = p->get_parent())
    m.command = p->get_name() + " " + m.command;
  for (const CLI::Option* opt : cmd->get_options()) {
    if (opt->count() == 0 || opt->get_name().empty()) continue;
    std::string joined;
    for (const std::string& r : opt->results()) {
      if (!joined.empty()) joined += ",";
      joined += r;
    }
    m.flags[opt->get_name()] = joined;
  }
  if (lp != nullptr) m.inputs[lp->source] = lp->content_digest;
  m.version = qglt::version;
  m.timestamp = io::timestamp_utc_now();
  m.seed = o.seed;
  return m;
}

void emit(const io::Manifest& m, const std::string& payload) {
  std::cout << io::with_manifest(m, payload) << "\n";
}

unsigned effective_jobs(unsigned jobs) {
  if (jobs != 0) return jobs;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1u : hc;
}

// ---- randomized verify batches ---------------------------------------------

struct BatchResult {
  int checked = 0;
  std::vector<int> failed;   // indices of failing draws
  double worst_margin = 0;   // most adverse margin seen (sign per check kind)
  json detail = json::array();
};

// Runs `one(i)` for i in [0, n) across the pool; `one` returns (passed,
// margin, detail-on-failure).
BatchResult run_batch(int n, unsigned jobs,
                      const std::function<std::tuple<bool, double, json>(int)>& one) {
  struct Slot {
    bool passed = true;
    double margin = 0.0;
    json detail;
  };
  std::vector<Slot> slots(static_cast<size_t>(n));
  parallel_for(static_cast<size_t>(n), jobs, [&](size_t i) {
    auto [ok, margin, detail] = one(static_cast<int>(i));
    slots[i] = {ok, margin, std::move(detail)};
  });
  BatchResult out;
  out.checked = n;
  bool first = true;
  for (size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].passed) {
      out.failed.push_back(static_cast<int>(i));
      out.detail.push_back(slots[i].detail);
    }
    if (first || slots[i].margin < out.worst_margin) out.worst_margin = slots[i].margin;
    first = false;
  }
  return out;
}

json batch_json(const std::string& check, const BatchResult& b) {
  return json{{"check", check},
              {"checked", b.checked},
              {"passed", b.failed.empty()},
              {"failures", b.failed},
              {"worst_margin", b.worst_margin},
              {"failure_detail", b.detail}};
}

std::mt19937_64 draw_rng(std::uint64_t seed, int index) {
  return std::mt19937_64(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(index) + 1);
}

// ---- verify kinds -----------------------------------------------------------

int emit_and_grade(const io::Manifest& m, const std::string& payload, bool passed) {
  emit(m, payload);
  return passed ? kExitOk : kExitCheckFailed;
}

int verify_sector(const CLI::App& app, const CLI::App* cmd, const CommonOpts& o, int random_n) {
  GridSpec grid = make_grid(o);
  SolverOptions solver = make_solver(o);
  if (random_n > 0) {
    io::Manifest m = make_manifest(app, cmd, o, nullptr);
    BatchResult b = run_batch(random_n, effective_jobs(o.jobs), [&](int i) {
      std::mt19937_64 rng = draw_rng(o.seed, i);
      EdgePotential profile = random_profile(rng);
      int n = o.edges > 0 ? o.edges : 3;
      SectorIdentityReport rep = verify_sector_identity(profile, n, o.gamma, grid, solver);
      return std::tuple<bool, double, json>(
          rep.passed, rep.tolerance - rep.residual,
          json::parse(io::to_json(rep)));
    });
    return emit_and_grade(m, batch_json("sector", b).dump(), b.failed.empty());
  }
  LoadedPotential lp = load_potential(o.potential);
  EdgePotential profile = as_profile(lp.value);
  int n = o.edges > 0 ? o.edges : 3;
  SectorIdentityReport rep = verify_sector_identity(profile, n, o.gamma, grid, solver);
  return emit_and_grade(make_manifest(app, cmd, o, &lp), io::to_json(rep), rep.passed);
}

int verify_lemma(const CLI::App& app, const CLI::App* cmd, const CommonOpts& o, int random_n) {
  GridSpec grid = make_grid(o);
  SolverOptions solver = make_solver(o);
  if (random_n > 0) {
    io::Manifest m = make_manifest(app, cmd, o, nullptr);
    BatchResult b = run_batch(random_n, effective_jobs(o.jobs), [&](int i) {
      std::mt19937_64 rng = draw_rng(o.seed, i);
      EdgePotential profile = random_profile(rng);
      SplitIdentityReport rep = verify_neumann_dirichlet_split(profile, o.gamma, grid, solver);
      return std::tuple<bool, double, json>(rep.passed, 1e-8 - rep.residual_rel,
                                            json::parse(io::to_json(rep)));
    });
    return emit_and_grade(m, batch_json("lemma", b).dump(), b.failed.empty());
  }
  LoadedPotential lp = load_potential(o.potential);
  EdgePotential profile = as_profile(lp.value);
  SplitIdentityReport rep = verify_neumann_dirichlet_split(profile, o.gamma, grid, solver);
  return emit_and_grade(make_manifest(app, cmd, o, &lp), io::to_json(rep), rep.passed);
}

CutReport cut_even_report(const PotentialField& field, double gamma, const GridSpec& grid,
                          double tol, const SolverOptions& solver) {
  return check_cut_domination(assemble_star(field, grid), assemble_cut_even(field, grid), gamma,
                              tol, solver);
}

CutReport cut_split_report(const PotentialField& field, const std::vector<int>& group,
                           double gamma, const GridSpec& grid, double tol,
                           const SolverOptions& solver) {
  return check_cut_domination(assemble_star(field, grid),
                              assemble_cut_split(field, grid, group), gamma, tol, solver);
}

int verify_cut(const CLI::App& app, const CLI::App* cmd, const CommonOpts& o, int random_n,
               bool even, const std::vector<int>& group, double tol) {
  GridSpec grid = make_grid(o);
  SolverOptions solver = make_solver(o);
  auto one_report = [&](const PotentialField& field) {
    return even ? cut_even_report(field, o.gamma, grid, tol, solver)
                : cut_split_report(field, group, o.gamma, grid, tol, solver);
  };
  if (random_n > 0) {
    int n = o.edges > 0 ? o.edges : (even ? 4 : 3);
    io::Manifest m = make_manifest(app, cmd, o, nullptr);
    BatchResult b = run_batch(random_n, effective_jobs(o.jobs), [&](int i) {
      std::mt19937_64 rng = draw_rng(o.seed, i);
      CutReport rep = one_report(random_field(rng, n));
      return std::tuple<bool, double, json>(rep.passed, tol - rep.max_violation,
                                            json::parse(io::to_json(rep)));
    });
    return emit_and_grade(m, batch_json(even ? "cut-even" : "cut-split", b).dump(),
                          b.failed.empty());
  }
  LoadedPotential lp = load_potential(o.potential);
  CutReport rep = one_report(as_field(lp.value, o.edges));
  return emit_and_grade(make_manifest(app, cmd, o, &lp), io::to_json(rep), rep.passed);
}

int verify_theorem1(const CLI::App& app, const CLI::App* cmd, const CommonOpts& o, int random_n,
                    double tol_report) {
  GridSpec grid = make_grid(o);
  CheckOptions copts;
  copts.tol_report = tol_report;
  copts.solver = make_solver(o);
  if (random_n > 0) {
    int n = o.edges > 0 ? o.edges : 2;
    io::Manifest m = make_manifest(app, cmd, o, nullptr);
    BatchResult b = run_batch(random_n, effective_jobs(o.jobs), [&](int i) {
      std::mt19937_64 rng = draw_rng(o.seed, i);
      LTReport rep = check_theorem1(random_field(rng, n), o.gamma, grid, copts);
      return std::tuple<bool, double, json>(rep.passed, rep.margin,
                                            json::parse(io::to_json(rep)));
    });
    return emit_and_grade(m, batch_json("theorem1", b).dump(), b.failed.empty());
  }
  LoadedPotential lp = load_potential(o.potential);
  LTReport rep = check_theorem1(as_field(lp.value, o.edges), o.gamma, grid, copts);
  return emit_and_grade(make_manifest(app, cmd, o, &lp), io::to_json(rep), rep.passed);
}

int verify_split_bound(const CLI::App& app, const CLI::App* cmd, const CommonOpts& o,
                       int random_n, int edge_index, double tol_report) {
  GridSpec grid = make_grid(o);
  CheckOptions copts;
  copts.tol_report = tol_report;
  copts.solver = make_solver(o);
  auto check_field = [&](const PotentialField& field) {
    // edge_index 0 = every distinguished edge
    json reports = json::array();
    bool all = true;
    double worst = 0.0;
    bool first = true;
    int lo = edge_index > 0 ? edge_index : 1;
    int hi = edge_index > 0 ? edge_index : field.graph.n_edges;
    for (int e = lo; e <= hi; ++e) {
      LTReport rep = check_split_bound(field, o.gamma, grid, e, copts);
      all = all && rep.passed;
      if (first || rep.margin < worst) worst = rep.margin;
      first = false;
      reports.push_back(json::parse(io::to_json(rep)));
    }
    return std::tuple<bool, double, json>(all, worst, std::move(reports));
  };
  if (random_n > 0) {
    int n = o.edges > 0 ? o.edges : 3;
    io::Manifest m = make_manifest(app, cmd, o, nullptr);
    BatchResult b = run_batch(random_n, effective_jobs(o.jobs), [&](int i) {
      std::mt19937_64 rng = draw_rng(o.seed, i);
      return check_field(random_field(rng, n));
    });
    return emit_and_grade(m, batch_json("split-bound", b).dump(), b.failed.empty());
  }
  LoadedPotential lp = load_potential(o.potential);
  auto [ok, worst, reports] = check_field(as_field(lp.value, o.edges));
  json payload{{"reports", reports}, {"passed", ok}, {"worst_margin", worst}};
  return emit_and_grade(make_manifest(app, cmd, o, &lp), payload.dump(), ok);
}

int verify_mono(const CLI::App& app, const CLI::App* cmd, const CommonOpts& o, int random_n,
                int n0, double l_n0, double tol_report) {
  GridSpec grid = make_grid(o);
  CheckOptions copts;
  copts.tol_report = tol_report;
  copts.solver = make_solver(o);
  std::optional<double> l_small;
  if (l_n0 > 0.0) l_small = l_n0;
  if (random_n > 0) {
    int n = o.edges > 0 ? o.edges : 5;
    io::Manifest m = make_manifest(app, cmd, o, nullptr);
    BatchResult b = run_batch(random_n, effective_jobs(o.jobs), [&](int i) {
      std::mt19937_64 rng = draw_rng(o.seed, i);
      LTReport rep = check_mono(random_field(rng, n), o.gamma, grid, n0, l_small, copts);
      return std::tuple<bool, double, json>(rep.passed, rep.margin,
                                            json::parse(io::to_json(rep)));
    });
    return emit_and_grade(m, batch_json("mono", b).dump(), b.failed.empty());
  }
  LoadedPotential lp = load_potential(o.potential);
  LTReport rep = check_mono(as_field(lp.value, o.edges), o.gamma, grid, n0, l_small, copts);
  return emit_and_grade(make_manifest(app, cmd, o, &lp), io::to_json(rep), rep.passed);
}

struct SweepCheck {
  TranslationSweep sweep;
  bool converged = false;
  bool monotone = false;
  bool passed = false;
};

SweepCheck run_sweep_check(const LinePotential& line, int n_edges, const CommonOpts& o,
                           const std::vector<double>& offsets, double tol_rel,
                           double mono_noise) {
  SweepOptions sopts;
  sopts.h = o.h;
  sopts.jobs = effective_jobs(o.jobs);
  sopts.solver = make_solver(o);
  SweepCheck out;
  std::vector<double> sorted = offsets;
  std::sort(sorted.begin(), sorted.end());
  out.sweep = translation_sweep(line, n_edges, o.gamma, sorted, sopts);
  out.converged = !out.sweep.points.empty() && out.sweep.points.back().rel_gap <= tol_rel;
  out.monotone = true;
  for (size_t i = 1; i < out.sweep.points.size(); ++i)
    out.monotone = out.monotone &&
                   out.sweep.points[i].rel_gap <= out.sweep.points[i - 1].rel_gap +
                       mono_noise / std::max(out.sweep.line_ratio, 1e-12);
  out.passed = out.converged && out.monotone;
  return out;
}

int verify_theorem2(const CLI::App& app, const CLI::App* cmd, const CommonOpts& o,
                    const std::vector<double>& offsets, double tol_rel, double mono_noise) {
  LoadedPotential lp = load_potential(o.potential);
  int n = o.edges > 0 ? o.edges : 3;
  SweepCheck chk = run_sweep_check(as_line(lp.value), n, o, offsets, tol_rel, mono_noise);
  json payload = json::parse(io::to_json(chk.sweep));
  payload["converged"] = chk.converged;
  payload["monotone"] = chk.monotone;
  payload["passed"] = chk.passed;
  return emit_and_grade(make_manifest(app, cmd, o, &lp), payload.dump(), chk.passed);
}

int verify_suite(const CLI::App& app, const CLI::App* cmd, const CommonOpts& o) {
  GridSpec grid = GridSpec::from_length(o.h, 16.0, far_bc_from_string(o.far_bc));
  SolverOptions solver = make_solver(o);
  CheckOptions copts;
  copts.solver = solver;
  const unsigned jobs = effective_jobs(o.jobs);

  struct Task {
    std::string name;
    std::function<std::pair<bool, json>()> run;
  };
  std::vector<Task> tasks;
  auto rng_at = [&](int salt) { return draw_rng(o.seed, salt); };

  for (int i = 0; i < 3; ++i)
    tasks.push_back({"sector/" + std::to_string(i), [&, i] {
                       auto rng = rng_at(100 + i);
                       auto rep = verify_sector_identity(random_profile(rng), 3, 0.5, grid, solver);
                       return std::make_pair(rep.passed, json::parse(io::to_json(rep)));
                     }});
  for (int i = 0; i < 3; ++i)
    tasks.push_back({"lemma/" + std::to_string(i), [&, i] {
                       auto rng = rng_at(200 + i);
                       auto rep = verify_neumann_dirichlet_split(random_profile(rng), 1.0, grid,
                                                                 solver);
                       return std::make_pair(rep.passed, json::parse(io::to_json(rep)));
                     }});
  for (int i = 0; i < 3; ++i)
    tasks.push_back({"cut-even/" + std::to_string(i), [&, i] {
                       auto rng = rng_at(300 + i);
                       auto rep = cut_even_report(random_field(rng, 4), 0.5, grid, 1e-9, solver);
                       return std::make_pair(rep.passed, json::parse(io::to_json(rep)));
                     }});
  for (int i = 0; i < 3; ++i)
    tasks.push_back({"cut-split/" + std::to_string(i), [&, i] {
                       auto rng = rng_at(400 + i);
                       auto rep = cut_split_report(random_field(rng, 3), {1}, 0.5, grid, 1e-9,
                                                   solver);
                       return std::make_pair(rep.passed, json::parse(io::to_json(rep)));
                     }});
  for (int n : {2, 3})
    for (int i = 0; i < 3; ++i)
      tasks.push_back({"theorem1/N" + std::to_string(n) + "/" + std::to_string(i), [&, n, i] {
                         auto rng = rng_at(500 + 10 * n + i);
                         auto rep = check_theorem1(random_field(rng, n), 0.5, grid, copts);
                         return std::make_pair(rep.passed, json::parse(io::to_json(rep)));
                       }});
  for (int i = 0; i < 3; ++i)
    tasks.push_back({"split-bound/" + std::to_string(i), [&, i] {
                       auto rng = rng_at(600 + i);
                       auto field = random_field(rng, 3);
                       bool ok = true;
                       json reports = json::array();
                       for (int e = 1; e <= 3; ++e) {
                         auto rep = check_split_bound(field, 0.5, grid, e, copts);
                         ok = ok && rep.passed;
                         reports.push_back(json::parse(io::to_json(rep)));
                       }
                       return std::make_pair(ok, std::move(reports));
                     }});
  for (int i = 0; i < 3; ++i)
    tasks.push_back({"mono/" + std::to_string(i), [&, i] {
                       auto rng = rng_at(700 + i);
                       auto rep = check_mono(random_field(rng, 5), 0.5, grid, 3, std::nullopt,
                                             copts);
                       return std::make_pair(rep.passed, json::parse(io::to_json(rep)));
                     }});
  tasks.push_back({"theorem2/well", [&] {
                     EdgePotential half{{{1.0, -1.0}}};
                     CommonOpts so = o;
                     SweepCheck chk = run_sweep_check(LinePotential{half, half}, 3, so,
                                                      {2.0, 4.0, 8.0}, 0.05, 1e-6);
                     return std::make_pair(chk.passed, json::parse(io::to_json(chk.sweep)));
                   }});

  std::vector<std::pair<bool, json>> results(tasks.size());
  parallel_for(tasks.size(), jobs, [&](size_t i) { results[i] = tasks[i].run(); });

  bool all = true;
  json checks = json::array();
  for (size_t i = 0; i < tasks.size(); ++i) {
    all = all && results[i].first;
    checks.push_back(json{{"name", tasks[i].name},
                          {"passed", results[i].first},
                          {"report", results[i].second}});
  }
  json payload{{"checks", checks}, {"passed", all}};
  return emit_and_grade(make_manifest(app, cmd, o, nullptr), payload.dump(), all);
}

// ---- top-level subcommands --------------------------------------------------

int cmd_solve(const CLI::App& app, const CLI::App* cmd, const CommonOpts& o, bool dump_op) {
  LoadedPotential lp = load_potential(o.potential);
  PotentialField field = as_field(lp.value, o.edges);
  GridSpec grid = make_grid(o);
  DiscreteOperator op = assemble_star(field, grid);
  Spectrum spec = negative_spectrum(op, make_solver(o));
  double trace = riesz_mean(spec, o.gamma);
  double norm = potential_norm(field, o.gamma);
  json payload{{"spectrum", json::parse(io::to_json(spec))},
               {"riesz", trace},
               {"norm", norm},
               {"ratio", norm > 0.0 ? json(trace / norm) : json()},
               {"gamma", o.gamma},
               {"n_edges", field.graph.n_edges},
               {"grid", {{"h", grid.step}, {"len", grid.edge_length()}}}};
  if (dump_op) payload["operator"] = json::parse(io::dump_operator(op));
  emit(make_manifest(app, cmd, o, &lp), payload.dump());
  return kExitOk;
}

int cmd_oracle(const CLI::App& app, const CLI::App* cmd, const CommonOpts& o, double kappa_max,
               const std::string& bc) {
  LoadedPotential lp = load_potential(o.potential);
  SecularResult res;
  if (const auto* p = std::get_if<EdgePotential>(&lp.value); p != nullptr && o.edges == 1) {
    double km = kappa_max > 0.0 ? kappa_max : std::sqrt(p->max_depth()) + 1.0;
    res = half_line_bound_states(*p, bc == "neumann" ? VertexBc::neumann : VertexBc::dirichlet,
                                 km);
  } else if (const auto* l = std::get_if<LinePotential>(&lp.value)) {
    double km = kappa_max > 0.0
                    ? kappa_max
                    : std::sqrt(std::max(l->neg.max_depth(), l->pos.max_depth())) + 1.0;
    res = line_bound_states(*l, km);
  } else {
    PotentialField field = as_field(lp.value, o.edges);
    double km = kappa_max > 0.0 ? kappa_max : default_kappa_max(field);
    res = secular_bound_states(field, km);
  }
  emit(make_manifest(app, cmd, o, &lp), io::to_json(res));
  return kExitOk;
}

int cmd_sweep(const CLI::App& app, const CLI::App* cmd, const CommonOpts& o,
              const std::vector<double>& offsets) {
  LoadedPotential lp = load_potential(o.potential);
  int n = o.edges > 0 ? o.edges : 3;
  SweepOptions sopts;
  sopts.h = o.h;
  sopts.jobs = effective_jobs(o.jobs);
  sopts.solver = make_solver(o);
  std::vector<double> sorted = offsets;
  std::sort(sorted.begin(), sorted.end());
  TranslationSweep sweep = translation_sweep(as_line(lp.value), n, o.gamma, sorted, sopts);
  io::Manifest m = make_manifest(app, cmd, o, &lp);
  if (o.format == "tsv")
    std::cout << io::to_tsv(sweep, m);
  else
    emit(m, io::to_json(sweep));
  return kExitOk;
}

int cmd_search(const CLI::App& app, const CLI::App* cmd, const CommonOpts& o,
               const SearchConfig& cfg) {
  SearchResult res = maximize_ratio(cfg, effective_jobs(o.jobs));
  io::Manifest m = make_manifest(app, cmd, o, nullptr);
  if (o.format == "tsv")
    std::cout << io::to_tsv(res.iterate_trace, m);
  else
    emit(m, io::to_json(res));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qglt: Schrodinger operators on star graphs - negative spectra, "
               "Lieb-Thirring ratios, sharpness sweeps, extremal search"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print help");
  app.set_config("--config")->envname("QGLT_CONFIG");
  app.set_version_flag("--version", qglt::version);

  CommonOpts o;

  // solve
  CLI::App* solve = app.add_subcommand("solve", "Negative spectrum and ratio for one field");
  bool dump_op = false;
  add_common(solve, o);
  solve->add_flag("--dump-operator", dump_op, "Embed the assembled pencil in the output");

  // verify
  CLI::App* verify = app.add_subcommand("verify", "Check identities and bounds (exit 2 on fail)");
  verify->require_subcommand(1);
  int random_n = 0;
  double tol_report = 1e-4;
  double cut_tol = 1e-9;
  int edge_index = 0;
  int n0 = 3;
  double l_n0 = 0.0;
  std::vector<int> group{1};
  std::vector<double> offsets{2.0, 4.0, 8.0, 16.0};
  double tol_rel = 0.02;
  double mono_noise = 1e-6;

  CLI::App* v_sector = verify->add_subcommand("sector", "Radial sector identity");
  add_common(v_sector, o);
  v_sector->add_option("--random", random_n, "Check K random inputs instead of --potential");

  CLI::App* v_lemma = verify->add_subcommand("lemma", "Neumann + Dirichlet = line identity");
  add_common(v_lemma, o);
  v_lemma->add_option("--random", random_n, "Check K random inputs instead of --potential");

  CLI::App* v_cut_even = verify->add_subcommand("cut-even", "Even-N pairing domination");
  add_common(v_cut_even, o);
  v_cut_even->add_option("--random", random_n, "Check K random inputs instead of --potential");
  v_cut_even->add_option("--cut-tol", cut_tol, "Entrywise domination tolerance")
      ->capture_default_str();

  CLI::App* v_cut_split = verify->add_subcommand("cut-split", "Vertex-splitting domination");
  add_common(v_cut_split, o);
  v_cut_split->add_option("--random", random_n, "Check K random inputs instead of --potential");
  v_cut_split->add_option("--group", group, "Edge ids (1-based) moved to the first sub-star")
      ->capture_default_str();
  v_cut_split->add_option("--cut-tol", cut_tol, "Entrywise domination tolerance")
      ->capture_default_str();

  CLI::App* v_theorem1 = verify->add_subcommand("theorem1", "Ratio bound (even/odd N)");
  add_common(v_theorem1, o);
  v_theorem1->add_option("--random", random_n, "Check K random inputs instead of --potential");
  v_theorem1->add_option("--tol-report", tol_report, "Slack added to the bound")
      ->capture_default_str();

  CLI::App* v_theorem2 = verify->add_subcommand("theorem2", "Sharpness via translation sweep");
  add_common(v_theorem2, o);
  v_theorem2->add_option("--offsets", offsets, "Translation offsets")->capture_default_str();
  v_theorem2->add_option("--tol-rel", tol_rel, "Relative gap required at the last offset")
      ->capture_default_str();
  v_theorem2->add_option("--mono-noise", mono_noise, "Absolute slack for gap monotonicity")
      ->capture_default_str();

  CLI::App* v_split = verify->add_subcommand("split-bound", "Per-edge split bound (odd N)");
  add_common(v_split, o);
  v_split->add_option("--random", random_n, "Check K random inputs instead of --potential");
  v_split->add_option("--edge-index", edge_index, "Distinguished edge (0 = all)")
      ->capture_default_str();
  v_split->add_option("--tol-report", tol_report, "Slack added to the bound")
      ->capture_default_str();

  CLI::App* v_mono = verify->add_subcommand("mono", "Odd-order interpolation bound");
  add_common(v_mono, o);
  v_mono->add_option("--random", random_n, "Check K random inputs instead of --potential");
  v_mono->add_option("--n0", n0, "Smaller odd order")->capture_default_str();
  v_mono->add_option("--l-n0", l_n0, "Override constant L_{gamma,n0} (> 0 to enable)");
  v_mono->add_option("--tol-report", tol_report, "Slack added to the bound")
      ->capture_default_str();

  CLI::App* v_suite = verify->add_subcommand("suite", "Compact battery across all checks");
  add_common(v_suite, o, /*with_potential=*/false);

  // sweep
  CLI::App* sweep = app.add_subcommand("sweep", "Translation sweep toward the line ratio");
  add_common(sweep, o);
  sweep->add_option("--offsets", offsets, "Translation offsets")->capture_default_str();

  // search
  CLI::App* search = app.add_subcommand("search", "Maximize the ratio over cell potentials");
  add_common(search, o, /*with_potential=*/false);
  SearchConfig scfg;
  search->add_option("--cells", scfg.cells_per_edge, "Cells per edge")->capture_default_str();
  search->add_option("--cell-width", scfg.cell_width, "Cell width (0 = 4h)")
      ->capture_default_str();
  search->add_option("--max-iters", scfg.max_iters, "Ascent iterations per restart")
      ->capture_default_str();
  search->add_option("--restarts", scfg.restarts, "Random restarts")->capture_default_str();
  search->add_option("--step-init", scfg.step_init, "Initial ascent step")->capture_default_str();
  search->add_option("--grad-tol", scfg.grad_tol, "Projected-gradient stopping norm")
      ->capture_default_str();
  bool symmetrize = false;
  search->add_flag("--symmetrize", symmetrize, "Search radial profiles via half-line sectors");

  // oracle
  CLI::App* oracle = app.add_subcommand("oracle", "Grid-free secular-equation bound states");
  add_common(oracle, o);
  double kappa_max = 0.0;
  std::string oracle_bc = "neumann";
  oracle->add_option("--kappa-max", kappa_max, "Scan upper limit (0 = sqrt(depth)+1)")
      ->capture_default_str();
  oracle->add_option("--bc", oracle_bc, "Half-line vertex condition with --edges 1")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(app, solve, o, dump_op);
    if (verify->parsed()) {
      if (v_sector->parsed()) return verify_sector(app, v_sector, o, random_n);
      if (v_lemma->parsed()) return verify_lemma(app, v_lemma, o, random_n);
      if (v_cut_even->parsed())
        return verify_cut(app, v_cut_even, o, random_n, /*even=*/true, group, cut_tol);
      if (v_cut_split->parsed())
        return verify_cut(app, v_cut_split, o, random_n, /*even=*/false, group, cut_tol);
      if (v_theorem1->parsed()) return verify_theorem1(app, v_theorem1, o, random_n, tol_report);
      if (v_theorem2->parsed())
        return verify_theorem2(app, v_theorem2, o, offsets, tol_rel, mono_noise);
      if (v_split->parsed())
        return verify_split_bound(app, v_split, o, random_n, edge_index, tol_report);
      if (v_mono->parsed()) return verify_mono(app, v_mono, o, random_n, n0, l_n0, tol_report);
      if (v_suite->parsed()) return verify_suite(app, v_suite, o);
    }
    if (sweep->parsed()) return cmd_sweep(app, sweep, o, offsets);
    if (search->parsed()) {
      scfg.n_edges = o.edges > 0 ? o.edges : 2;
      scfg.gamma = o.gamma;
      scfg.h = o.h;
      scfg.edge_length = o.len;
      scfg.far_bc = far_bc_from_string(o.far_bc);
      scfg.seed = o.seed;
      scfg.symmetrize = symmetrize;
      scfg.solver = make_solver(o);
      return cmd_search(app, search, o, scfg);
    }
    if (oracle->parsed()) return cmd_oracle(app, oracle, o, kappa_max, oracle_bc);
  } catch (const Error& e) {
    std::cerr << "qglt: " << e.what() << "\n";  // what() already carries the code name
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "qglt: " << e.what() << "\n";
    return kExitUsage;
  }
  std::cerr << "qglt: no subcommand\n";
  return kExitUsage;
}

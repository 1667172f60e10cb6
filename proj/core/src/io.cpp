#include "qglt/io.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace qglt::io {

using nlohmann::json;

namespace {

json profile_to_json_value(const EdgePotential& profile) {
  json arr = json::array();
  for (const Segment& s : profile.segments()) arr.push_back({{"len", s.length}, {"val", s.value}});
  return arr;
}

json field_to_json_value(const PotentialField& field) {
  json edges = json::array();
  for (const EdgePotential& p : field.per_edge) edges.push_back(profile_to_json_value(p));
  return json{{"n_edges", field.graph.n_edges}, {"edges", std::move(edges)}};
}

std::string dump(const json& j, int indent) { return j.dump(indent); }

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  throw Error(Errc::schema_error, (path.empty() ? "$" : path) + ": " + what);
}

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
  return j.get<double>();
}

EdgePotential parse_profile(const json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array of {len, val} segments");
  std::vector<Segment> segs;
  segs.reserve(j.size());
  for (size_t k = 0; k < j.size(); ++k) {
    const std::string p = path + "[" + std::to_string(k) + "]";
    const json& e = j[k];
    if (!e.is_object()) schema_fail(p, "expected an object with keys len, val");
    if (!e.contains("len")) schema_fail(p, "missing key 'len'");
    if (!e.contains("val")) schema_fail(p, "missing key 'val'");
    for (const auto& kv : e.items())
      if (kv.key() != "len" && kv.key() != "val") schema_fail(p, "unknown key '" + kv.key() + "'");
    const double len = require_number(e["len"], p + ".len");
    if (!(len > 0.0) || !std::isfinite(len))
      schema_fail(p + ".len", "segment length must be positive and finite");
    segs.push_back({len, require_number(e["val"], p + ".val")});
  }
  try {
    return EdgePotential{std::move(segs)};
  } catch (const Error& err) {
    schema_fail(path, err.what());
  }
}

PotentialField parse_field(const json& j) {
  if (!j.is_object()) schema_fail("$", "expected a field object");
  if (!j.contains("n_edges")) schema_fail("$", "missing key 'n_edges'");
  if (!j.contains("edges")) schema_fail("$", "missing key 'edges'");
  const json& n = j["n_edges"];
  if (!n.is_number_integer() || n.get<long long>() < 1)
    schema_fail("$.n_edges", "expected an integer >= 1");
  const json& edges = j["edges"];
  if (!edges.is_array()) schema_fail("$.edges", "expected an array of profiles");
  if (edges.size() != static_cast<size_t>(n.get<long long>()))
    schema_fail("$.edges", "length must equal n_edges");
  std::vector<EdgePotential> per_edge;
  per_edge.reserve(edges.size());
  for (size_t k = 0; k < edges.size(); ++k)
    per_edge.push_back(parse_profile(edges[k], "$.edges[" + std::to_string(k) + "]"));
  try {
    return PotentialField{StarGraph{static_cast<int>(n.get<long long>())}, std::move(per_edge)};
  } catch (const Error& err) {
    schema_fail("$", err.what());
  }
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw Error(Errc::schema_error, std::string("invalid JSON: ") + err.what());
  }
}

const char* root_type_name(RootType t) {
  switch (t) {
    case RootType::kirchhoff: return "kirchhoff";
    case RootType::vertex_dirichlet: return "vertex_dirichlet";
    case RootType::neumann: return "neumann";
    case RootType::dirichlet: return "dirichlet";
  }
  return "unknown";
}

json finite_or_null(double x) {
  if (std::isfinite(x)) return json(x);
  return json();
}

json spectrum_value(const Spectrum& spec) {
  return json{{"count", spec.count()},
              {"eigenvalues", spec.eigenvalues},
              {"near_zero_flag", spec.near_zero_flag},
              {"tol_eig", spec.tol_eig},
              {"tol_zero", spec.tol_zero}};
}

json grid_value(const GridInfo& g) { return json{{"h", g.h}, {"len", g.len}}; }

json manifest_value(const Manifest& m) {
  return json{{"command", m.command}, {"flags", m.flags},         {"inputs", m.inputs},
              {"seed", m.seed},       {"timestamp", m.timestamp}, {"version", m.version}};
}

json operator_value(const DiscreteOperator& op) {
  json j;
  switch (op.structure()) {
    case OpStructure::star: j["structure"] = "star"; break;
    case OpStructure::half_line: j["structure"] = "half_line"; break;
    case OpStructure::line: j["structure"] = "line"; break;
    case OpStructure::direct_sum: j["structure"] = "direct_sum"; break;
  }
  j["n_unknowns"] = op.n_unknowns();
  if (op.structure() == OpStructure::direct_sum) {
    json parts = json::array();
    for (const DiscreteOperator& p : op.parts()) parts.push_back(operator_value(p));
    j["parts"] = std::move(parts);
    return j;
  }
  j["h"] = op.grid().step;
  j["far_bc"] = to_string(op.grid().far_bc);
  if (op.has_vertex())
    j["vertex"] = json{{"diag", op.vertex().diag}, {"mass", op.vertex().mass}};
  else
    j["vertex"] = json();
  json chains = json::array();
  for (const EdgeChain& c : op.chains())
    chains.push_back(json{
        {"diag", c.diag}, {"mass", c.mass}, {"off", c.off}, {"coupling", c.coupling}});
  j["chains"] = std::move(chains);
  return j;
}

void write_tsv_manifest(std::ostream& os, const Manifest& m) {
  os << "# qglt " << m.version << "\n";
  os << "# manifest\t" << manifest_value(m).dump() << "\n";
}

}  // namespace

std::string to_json(const PotentialField& field, int indent) {
  return dump(field_to_json_value(field), indent);
}

std::string to_json(const EdgePotential& profile, int indent) {
  return dump(profile_to_json_value(profile), indent);
}

std::string to_json(const LinePotential& line, int indent) {
  return dump(json{{"neg", profile_to_json_value(line.neg)},
                   {"pos", profile_to_json_value(line.pos)}},
              indent);
}

PotentialField field_from_json(const std::string& text) { return parse_field(parse_text(text)); }

PotentialInput potential_from_json(const std::string& text) {
  json j = parse_text(text);
  if (j.is_array()) return parse_profile(j, "$");
  if (j.is_object()) {
    if (j.contains("n_edges") || j.contains("edges")) return parse_field(j);
    if (j.contains("neg") || j.contains("pos")) {
      for (const auto& kv : j.items())
        if (kv.key() != "neg" && kv.key() != "pos")
          schema_fail("$", "unknown key '" + kv.key() + "'");
      LinePotential line;
      if (j.contains("neg")) line.neg = parse_profile(j["neg"], "$.neg");
      if (j.contains("pos")) line.pos = parse_profile(j["pos"], "$.pos");
      return line;
    }
  }
  schema_fail("$", "expected a profile array, a {neg, pos} line, or an {n_edges, edges} field");
}

PotentialInput potential_from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_argument, "cannot read potential file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return potential_from_json(buf.str());
}

std::string digest(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

std::string digest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_argument, "cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return digest(buf.str());
}

std::string timestamp_utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char out[32];
  std::strftime(out, sizeof out, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return out;
}

std::string to_json(const Manifest& m) { return manifest_value(m).dump(); }

std::string to_json(const Spectrum& spec) { return spectrum_value(spec).dump(); }

std::string to_json(const LTReport& report) {
  return json{{"gamma", report.gamma},
              {"n_edges", report.n_edges},
              {"trace", report.trace},
              {"norm", report.norm},
              {"ratio", report.ratio},
              {"bound", report.bound},
              {"margin", report.margin},
              {"passed", report.passed},
              {"provenance", report.provenance},
              {"grid", grid_value(report.grid)}}
      .dump();
}

std::string to_json(const SecularResult& result) {
  json roots = json::array();
  for (const SecularRoot& r : result.roots)
    roots.push_back(json{{"kappa", r.kappa},
                         {"energy", r.energy},
                         {"multiplicity", r.multiplicity},
                         {"type", root_type_name(r.type)}});
  return json{{"roots", std::move(roots)},
              {"spectrum", spectrum_value(result.spectrum)},
              {"scan_too_coarse", result.scan_too_coarse},
              {"scan_points", result.scan_points}}
      .dump();
}

std::string to_json(const SectorIdentityReport& report) {
  return json{{"n_edges", report.n_edges},
              {"gamma", report.gamma},
              {"trace_star", report.trace_star},
              {"trace_sectors", report.trace_sectors},
              {"residual", report.residual},
              {"tolerance", report.tolerance},
              {"count_star", report.count_star},
              {"count_sectors", report.count_sectors},
              {"multiset_max_diff", finite_or_null(report.multiset_max_diff)},
              {"key_identity_residual", report.key_identity_residual},
              {"passed", report.passed}}
      .dump();
}

std::string to_json(const SplitIdentityReport& report) {
  return json{{"gamma", report.gamma},
              {"trace_neumann", report.trace_neumann},
              {"trace_dirichlet", report.trace_dirichlet},
              {"trace_line", report.trace_line},
              {"residual_rel", report.residual_rel},
              {"passed", report.passed}}
      .dump();
}

std::string to_json(const CutReport& report) {
  return json{{"star_count", report.star_count},
              {"cut_count", report.cut_count},
              {"max_violation", report.max_violation},
              {"trace_star", report.trace_star},
              {"trace_cut", report.trace_cut},
              {"gamma", report.gamma},
              {"passed", report.passed}}
      .dump();
}

std::string to_json(const TranslationSweep& sweep) {
  json points = json::array();
  for (const SweepPoint& p : sweep.points)
    points.push_back(json{{"offset", p.offset}, {"ratio", p.ratio}, {"rel_gap", p.rel_gap}});
  return json{{"gamma", sweep.gamma},
              {"n_edges", sweep.n_edges},
              {"line_ratio", sweep.line_ratio},
              {"grid", grid_value(sweep.grid)},
              {"points", std::move(points)}}
      .dump();
}

std::string to_json(const SearchResult& result) {
  json trace = json::array();
  for (const TracePoint& t : result.iterate_trace)
    trace.push_back(json{{"iteration", t.iteration}, {"ratio", t.ratio}});
  return json{{"best_ratio", result.best_ratio},
              {"best_cells", result.best_cells},
              {"best_field", field_to_json_value(result.best_field)},
              {"iterate_trace", std::move(trace)},
              {"terminated_by", to_string(result.terminated_by)},
              {"degenerate_warnings", result.degenerate_warnings},
              {"best_restart", result.best_restart},
              {"max_iterate_ratio", result.max_iterate_ratio}}
      .dump();
}

std::string with_manifest(const Manifest& m, const std::string& payload_json, int indent) {
  json payload = parse_text(payload_json);
  json j;
  j["manifest"] = manifest_value(m);
  if (payload.is_object()) {
    for (auto& kv : payload.items()) j[kv.key()] = kv.value();
  } else {
    j["result"] = std::move(payload);
  }
  return j.dump(indent);
}

std::string to_tsv(const TranslationSweep& sweep, const Manifest& m) {
  std::ostringstream os;
  os << std::setprecision(12);
  write_tsv_manifest(os, m);
  os << "# gamma\t" << sweep.gamma << "\tn_edges\t" << sweep.n_edges << "\n";
  os << "a\tratio\tline_ratio\trel_gap\n";
  for (const SweepPoint& p : sweep.points)
    os << p.offset << "\t" << p.ratio << "\t" << sweep.line_ratio << "\t" << p.rel_gap << "\n";
  return os.str();
}

std::string to_tsv(const std::vector<TracePoint>& trace, const Manifest& m) {
  std::ostringstream os;
  os << std::setprecision(12);
  write_tsv_manifest(os, m);
  os << "iteration\tratio\n";
  for (const TracePoint& t : trace) os << t.iteration << "\t" << t.ratio << "\n";
  return os.str();
}

std::string dump_operator(const DiscreteOperator& op, int indent) {
  return operator_value(op).dump(indent);
}

}  // namespace qglt::io

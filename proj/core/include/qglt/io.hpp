#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "qglt/lieb_thirring.hpp"
#include "qglt/operators.hpp"
#include "qglt/potential.hpp"
#include "qglt/search.hpp"
#include "qglt/spectrum.hpp"
#include "qglt/symmetry.hpp"

namespace qglt::io {

// ---- potential (de)serialization ------------------------------------------
// Field schema: {"n_edges": N, "edges": [[{"len": l, "val": v}, ...], ...]}.
// A bare array of {len, val} is a single half-line profile; {"neg": [...],
// "pos": [...]} is a line potential.  Schema errors cite the JSON path.

std::string to_json(const PotentialField& field, int indent = -1);
std::string to_json(const EdgePotential& profile, int indent = -1);
std::string to_json(const LinePotential& line, int indent = -1);

PotentialField field_from_json(const std::string& text);

using PotentialInput = std::variant<EdgePotential, PotentialField, LinePotential>;
PotentialInput potential_from_json(const std::string& text);
PotentialInput potential_from_file(const std::string& path);

// ---- run manifest ----------------------------------------------------------
struct Manifest {
  std::string command;
  std::map<std::string, std::string> flags;
  std::map<std::string, std::string> inputs;  // path -> content digest
  std::string version;
  std::string timestamp;  // ISO-8601 UTC; excluded from equality
  std::uint64_t seed = 0;
};

// FNV-1a 64-bit content digest, hex.
std::string digest(const std::string& bytes);
std::string digest_file(const std::string& path);
std::string timestamp_utc_now();

std::string to_json(const Manifest& m);

// ---- result emission -------------------------------------------------------
std::string to_json(const Spectrum& spec);
std::string to_json(const LTReport& report);
std::string to_json(const SecularResult& result);
std::string to_json(const SectorIdentityReport& report);
std::string to_json(const SplitIdentityReport& report);
std::string to_json(const CutReport& report);
std::string to_json(const TranslationSweep& sweep);
std::string to_json(const SearchResult& result);

// Wraps a payload JSON object with its manifest: {"manifest": ..., <payload>}.
std::string with_manifest(const Manifest& m, const std::string& payload_json, int indent = 2);

// TSV emitters: leading '#' comment lines carry the manifest.
std::string to_tsv(const TranslationSweep& sweep, const Manifest& m);
std::string to_tsv(const std::vector<TracePoint>& trace, const Manifest& m);

// Debug dump of the assembled pencil for cross-implementation diffing.
std::string dump_operator(const DiscreteOperator& op, int indent = 2);

}  // namespace qglt::io

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "freelunch/convergence.hpp"
#include "freelunch/lattice.hpp"
#include "freelunch/lunch.hpp"

namespace freelunch {

// Shortest text that parses back to the same double.
std::string format_double(double x);

std::uint64_t fnv1a64(const std::string& bytes);

// A run's configuration, kept as the parsed JSON document so serialising it
// back is lossless by construction. Typed accessors validate on use and throw
// ConfigError with the offending key in the message.
struct ExperimentConfig {
  nlohmann::json doc;

  static ExperimentConfig from_string(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);

  std::string canonical() const; // sorted-key dump, the hashing input
  std::uint64_t hash() const;

  KernelSpec kernel() const;
  InnovationLaw law() const;
  MarketSpec market() const; // kernel + law + lambda + price map
  std::vector<long> n_list() const;
  double t0() const;
  // Horizon: explicit "T", else t0 + (j_steps + 2)/n.
  double horizon(long n) const;
  long j_steps() const; // j_max = j0 + j_steps
  double lambda() const;
  PriceMap price_map() const;
  std::uint64_t seed() const;
  bool has(const std::string& key) const { return doc.contains(key); }
  const nlohmann::json& options() const;
};

nlohmann::json kernel_to_json(const KernelSpec& kernel);
KernelSpec kernel_from_json(const nlohmann::json& j);
nlohmann::json law_to_json(const InnovationLaw& law);
InnovationLaw law_from_json(const nlohmann::json& j);

// theta,kappa two-column CSV (header required) -> tabulated kernel.
KernelSpec load_tabulated_csv(std::istream& in);

// Provenance block embedded in every artifact.
nlohmann::json metadata_json(std::uint64_t config_hash, std::uint64_t seed);
// The same block as CSV comment lines ("# key=value\n").
std::string metadata_comment(std::uint64_t config_hash, std::uint64_t seed);

struct ScanRow {
  long n = 0;
  long j = 0;
  double lambda_bar = 0.0;
  double esssup_xy = 0.0;
  double essinf_z = 0.0;
  Verdict verdict = Verdict::None;
};

void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows,
                    const std::string& comment);
void write_path_csv(std::ostream& out, const GridSpec& grid, const MarketPath& path,
                    const std::string& comment);
void write_decomposition_csv(std::ostream& out, const GridSpec& grid,
                             const PathDecomposition& dec, const std::string& comment);
void write_convergence_csv(std::ostream& out, const ConvergenceReport& report,
                           const std::string& comment);

nlohmann::json certificate_json(const ArbitrageCertificate& cert,
                                const MarketSpec& market, const GridSpec& grid,
                                const nlohmann::json& metadata);

} // namespace freelunch

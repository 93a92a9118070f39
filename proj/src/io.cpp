#include "freelunch/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "freelunch/errors.hpp"
#include "freelunch/version.hpp"

namespace freelunch {
namespace {

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
  return buf;
}

const nlohmann::json& require_key(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError(std::string("config: missing key \"") + key + "\"");
  }
  return *it;
}

double number_at(const nlohmann::json& j, const char* key) {
  const nlohmann::json& v = require_key(j, key);
  if (!v.is_number()) {
    throw ConfigError(std::string("config: \"") + key + "\" must be a number");
  }
  return v.get<double>();
}

std::vector<double> number_list(const nlohmann::json& v, const char* key) {
  if (!v.is_array()) {
    throw ConfigError(std::string("config: \"") + key + "\" must be an array");
  }
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) {
      throw ConfigError(std::string("config: \"") + key + "\" must hold numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

} // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
  ExperimentConfig cfg;
  try {
    cfg.doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: parse failure: ") + e.what());
  }
  if (!cfg.doc.is_object()) throw ConfigError("config: top level must be an object");
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

std::string ExperimentConfig::canonical() const { return doc.dump(); }

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(canonical()); }

KernelSpec ExperimentConfig::kernel() const {
  return kernel_from_json(require_key(doc, "kernel"));
}

InnovationLaw ExperimentConfig::law() const {
  return law_from_json(require_key(doc, "law"));
}

MarketSpec ExperimentConfig::market() const {
  MarketSpec m(kernel(), law());
  m.lambda = lambda();
  m.price_map = price_map();
  return m;
}

std::vector<long> ExperimentConfig::n_list() const {
  const nlohmann::json& grid = require_key(doc, "grid");
  const bool has_n = grid.contains("n");
  const bool has_list = grid.contains("n_list");
  if (has_n == has_list) {
    throw ConfigError("config: grid needs exactly one of \"n\" or \"n_list\"");
  }
  std::vector<long> out;
  if (has_n) {
    out.push_back(static_cast<long>(number_at(grid, "n")));
  } else {
    for (double v : number_list(grid.at("n_list"), "n_list")) {
      out.push_back(static_cast<long>(v));
    }
  }
  for (long n : out) {
    if (n < 1) throw ConfigError("config: grid sizes must be positive integers");
  }
  return out;
}

double ExperimentConfig::t0() const {
  const nlohmann::json& grid = require_key(doc, "grid");
  return grid.contains("t0") ? number_at(grid, "t0") : 0.0;
}

double ExperimentConfig::horizon(long n) const {
  const nlohmann::json& grid = require_key(doc, "grid");
  if (grid.contains("T")) return number_at(grid, "T");
  return t0() + static_cast<double>(j_steps() + 2) / static_cast<double>(n);
}

long ExperimentConfig::j_steps() const {
  const nlohmann::json& grid = require_key(doc, "grid");
  if (!grid.contains("j_steps")) return 50;
  const long steps = static_cast<long>(number_at(grid, "j_steps"));
  if (steps < 0) throw ConfigError("config: \"j_steps\" must be nonnegative");
  return steps;
}

double ExperimentConfig::lambda() const {
  if (!doc.contains("lambda")) return 0.0;
  const double v = number_at(doc, "lambda");
  if (v < 0.0) throw ConfigError("config: \"lambda\" must be nonnegative");
  return v;
}

PriceMap ExperimentConfig::price_map() const {
  if (!doc.contains("price_map")) return PriceMap::identity();
  const nlohmann::json& pm = doc.at("price_map");
  if (pm.is_string()) {
    const std::string kind = pm.get<std::string>();
    if (kind == "identity") return PriceMap::identity();
    if (kind == "exponential") return PriceMap::exponential();
    throw ConfigError("config: unknown price_map \"" + kind + "\"");
  }
  if (pm.is_object()) {
    return PriceMap::custom(number_list(require_key(pm, "xs"), "xs"),
                            number_list(require_key(pm, "gs"), "gs"));
  }
  throw ConfigError("config: \"price_map\" must be a string or an object");
}

std::uint64_t ExperimentConfig::seed() const {
  if (!doc.contains("seed")) return 1;
  const nlohmann::json& v = doc.at("seed");
  if (!v.is_number_unsigned() && !v.is_number_integer()) {
    throw ConfigError("config: \"seed\" must be an integer");
  }
  return v.get<std::uint64_t>();
}

const nlohmann::json& ExperimentConfig::options() const {
  static const nlohmann::json empty = nlohmann::json::object();
  return doc.contains("options") ? doc.at("options") : empty;
}

nlohmann::json kernel_to_json(const KernelSpec& kernel) {
  nlohmann::json j;
  switch (kernel.variant()) {
    case KernelVariant::BrownianConstant:
      j["variant"] = "brownian_constant";
      break;
    case KernelVariant::FbmMovingAverage:
      j["variant"] = "fbm_moving_average";
      j["hurst"] = kernel.hurst();
      break;
    case KernelVariant::FbmSottinen:
      j["variant"] = "fbm_sottinen";
      j["hurst"] = kernel.hurst();
      break;
    case KernelVariant::OrnsteinUhlenbeck:
      j["variant"] = "ornstein_uhlenbeck";
      j["kappa0"] = kernel.param_kappa0();
      j["v"] = kernel.param_v();
      break;
    case KernelVariant::Rogers:
      j["variant"] = "rogers";
      j["k"] = kernel.param_k();
      j["v"] = kernel.param_v();
      j["hurst"] = kernel.hurst();
      break;
    case KernelVariant::MixedBm:
      j["variant"] = "mixed_bm";
      j["sigma"] = kernel.param_sigma();
      j["hurst"] = kernel.hurst();
      break;
    case KernelVariant::Tabulated:
      j["variant"] = "tabulated";
      j["thetas"] = kernel.table_thetas();
      j["kappas"] = kernel.table_kappas();
      break;
  }
  return j;
}

KernelSpec kernel_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: \"kernel\" must be an object");
  const nlohmann::json& v = require_key(j, "variant");
  if (!v.is_string()) throw ConfigError("config: kernel \"variant\" must be a string");
  const std::string variant = v.get<std::string>();
  try {
    if (variant == "brownian_constant") return KernelSpec::brownian_constant();
    if (variant == "fbm_moving_average") {
      return KernelSpec::fbm_moving_average(number_at(j, "hurst"));
    }
    if (variant == "fbm_sottinen") {
      return KernelSpec::fbm_sottinen(number_at(j, "hurst"));
    }
    if (variant == "ornstein_uhlenbeck") {
      return KernelSpec::ornstein_uhlenbeck(number_at(j, "kappa0"), number_at(j, "v"));
    }
    if (variant == "rogers") {
      return KernelSpec::rogers(number_at(j, "k"), number_at(j, "v"),
                                number_at(j, "hurst"));
    }
    if (variant == "mixed_bm") {
      return KernelSpec::mixed_bm(number_at(j, "sigma"), number_at(j, "hurst"));
    }
    if (variant == "tabulated") {
      return KernelSpec::tabulated(number_list(require_key(j, "thetas"), "thetas"),
                                   number_list(require_key(j, "kappas"), "kappas"));
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: kernel parameters: ") + e.what());
  }
  throw ConfigError("config: unknown kernel variant \"" + variant + "\"");
}

nlohmann::json law_to_json(const InnovationLaw& law) {
  nlohmann::json j;
  j["kind"] = "atoms";
  std::vector<double> values, probs;
  for (const auto& a : law.atoms()) {
    values.push_back(a.value);
    probs.push_back(a.prob);
  }
  j["values"] = values;
  j["probs"] = probs;
  return j;
}

InnovationLaw law_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: \"law\" must be an object");
  const nlohmann::json& k = require_key(j, "kind");
  if (!k.is_string()) throw ConfigError("config: law \"kind\" must be a string");
  const std::string kind = k.get<std::string>();
  try {
    if (kind == "rademacher") return InnovationLaw::rademacher();
    if (kind == "two_point") {
      return InnovationLaw::two_point(number_at(j, "down"), number_at(j, "up"));
    }
    if (kind == "atoms") {
      return InnovationLaw::from_atoms(number_list(require_key(j, "values"), "values"),
                                       number_list(require_key(j, "probs"), "probs"));
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: law parameters: ") + e.what());
  }
  throw ConfigError("config: unknown law kind \"" + kind + "\"");
}

KernelSpec load_tabulated_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("tabulated csv: empty input");
  // Tolerate a UTF-8 BOM and surrounding whitespace in the header.
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (line != "theta,kappa") {
    throw ConfigError("tabulated csv: header must be \"theta,kappa\"");
  }
  std::vector<double> thetas, kappas;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    const char* p = line.c_str();
    char* end = nullptr;
    const double theta = std::strtod(p, &end);
    if (end == p || *end != ',') {
      throw ConfigError("tabulated csv: malformed row at line " + std::to_string(lineno));
    }
    p = end + 1;
    const double kappa = std::strtod(p, &end);
    if (end == p || *end != '\0') {
      throw ConfigError("tabulated csv: malformed row at line " + std::to_string(lineno));
    }
    thetas.push_back(theta);
    kappas.push_back(kappa);
  }
  try {
    return KernelSpec::tabulated(std::move(thetas), std::move(kappas));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("tabulated csv: ") + e.what());
  }
}

nlohmann::json metadata_json(std::uint64_t config_hash, std::uint64_t seed) {
  nlohmann::json m;
  m["config_hash"] = hex16(config_hash);
  m["seed"] = seed;
  m["prng"] = kPrngId;
  m["version"] = kVersion;
  return m;
}

std::string metadata_comment(std::uint64_t config_hash, std::uint64_t seed) {
  std::string out;
  out += "# config_hash=" + hex16(config_hash) + "\n";
  out += "# seed=" + std::to_string(seed) + "\n";
  out += std::string("# prng=") + kPrngId + "\n";
  out += std::string("# version=") + kVersion + "\n";
  return out;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows,
                    const std::string& comment) {
  out << comment << "n,j,lambda_bar,esssup_xy,essinf_z,verdict\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.j << ',' << format_double(r.lambda_bar) << ','
        << format_double(r.esssup_xy) << ',' << format_double(r.essinf_z) << ','
        << verdict_name(r.verdict) << '\n';
  }
}

void write_path_csv(std::ostream& out, const GridSpec& grid, const MarketPath& path,
                    const std::string& comment) {
  out << comment << "j,time,Z,A,S\n";
  const long j0 = grid.j0();
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    out << (j0 + static_cast<long>(k)) << ',' << format_double(path.times[k]) << ','
        << format_double(path.z[k]) << ',' << format_double(path.a[k]) << ','
        << format_double(path.s[k]) << '\n';
  }
}

void write_decomposition_csv(std::ostream& out, const GridSpec& grid,
                             const PathDecomposition& dec, const std::string& comment) {
  out << comment << "j,x,z_coeff\n";
  out << dec.j << ',' << format_double(dec.x) << ',' << format_double(dec.z_coeff)
      << "\n\n";
  out << "i,y_coeff\n";
  const long j0 = grid.j0();
  for (std::size_t k = 0; k < dec.y_coeffs.size(); ++k) {
    out << (j0 + static_cast<long>(k)) << ',' << format_double(dec.y_coeffs[k]) << '\n';
  }
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report,
                           const std::string& comment) {
  out << comment << "n,t,T,discrete,limit,abs_error\n";
  for (const auto& r : report.rows) {
    out << r.n << ',' << format_double(r.t) << ',' << format_double(r.T) << ','
        << format_double(r.discrete) << ',' << format_double(r.limit) << ','
        << format_double(r.abs_error) << '\n';
  }
}

nlohmann::json certificate_json(const ArbitrageCertificate& cert,
                                const MarketSpec& market, const GridSpec& grid,
                                const nlohmann::json& metadata) {
  nlohmann::json j;
  j["kernel"] = kernel_to_json(market.kernel);
  j["law"] = law_to_json(market.law(grid.n));
  j["n"] = grid.n;
  j["t0"] = grid.t0;
  j["j0"] = grid.j0();
  j["j_star"] = cert.j_star;
  j["lambda"] = cert.lambda;
  j["lambda_bar"] = cert.lambda_bar;
  j["witness"] = cert.witness;
  j["verdict"] = verdict_name(cert.verdict);
  j["metadata"] = metadata;
  return j;
}

} // namespace freelunch

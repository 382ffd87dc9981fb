#include "ves/data_io.hpp"

#include <algorithm>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "ves/error.hpp"

namespace ves {

bool operator==(const PlantRecord& a, const PlantRecord& b) {
  return a.industry_code == b.industry_code && a.state == b.state && a.year == b.year &&
         a.value_added == b.value_added && a.workers == b.workers && a.capital == b.capital &&
         a.wages == b.wages;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char ch : value) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error(ErrorCode::io, "cannot format number");
  return {buf, ptr};
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<int> parse_int(std::string_view s) {
  s = trim(s);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

IngestResult ingest(std::istream& in, const IngestConfig& config) {
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) {
    throw Error(ErrorCode::empty_input, "input has no header row");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const std::vector<std::string> header = split_csv_line(line);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index.emplace(std::string(trim(header[i])), i);

  const ColumnMap& cm = config.columns;
  auto column = [&](const std::string& name, bool required) -> std::optional<std::size_t> {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    if (required) throw Error(ErrorCode::schema, "missing mandatory column '" + name + "'");
    return std::nullopt;
  };
  const std::size_t c_code = *column(cm.industry_code, true);
  const std::size_t c_state = *column(cm.state, true);
  const std::size_t c_year = *column(cm.year, true);
  const std::size_t c_va = *column(cm.value_added, true);
  const std::size_t c_workers = *column(cm.workers, true);
  const std::size_t c_capital = *column(cm.capital, true);
  const std::optional<std::size_t> c_wages = column(cm.wages, false);
  const std::optional<std::size_t> c_deflator =
      config.apply_deflator ? column(cm.deflator, true) : std::nullopt;

  IngestResult result;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const std::size_t this_row = row++;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != header.size()) {
      result.excluded.add("malformed-row", this_row);
      continue;
    }
    auto missing = [&](std::size_t c) { return trim(f[c]).empty(); };
    if (missing(c_code) || missing(c_state) || missing(c_year) || missing(c_va) ||
        missing(c_workers) || missing(c_capital)) {
      result.excluded.add("missing-field", this_row);
      continue;
    }
    const auto year = parse_int(f[c_year]);
    const auto va = parse_double(f[c_va]);
    const auto workers = parse_double(f[c_workers]);
    const auto capital = parse_double(f[c_capital]);
    std::optional<double> wages;
    bool bad_number = !year || !va || !workers || !capital;
    if (c_wages && !missing(*c_wages)) {
      wages = parse_double(f[*c_wages]);
      bad_number = bad_number || !wages;
    }
    std::optional<double> deflator;
    if (c_deflator) {
      deflator = parse_double(f[*c_deflator]);
      bad_number = bad_number || !deflator;
    }
    if (bad_number) {
      result.excluded.add("unparseable-numeric", this_row);
      continue;
    }
    if (!(*va > 0.0)) {
      result.excluded.add("nonpositive-value-added", this_row);
      continue;
    }
    if (!(*workers > 0.0)) {
      result.excluded.add("nonpositive-workers", this_row);
      continue;
    }
    if (!(*capital > 0.0)) {
      result.excluded.add("nonpositive-capital", this_row);
      continue;
    }
    if (wages && *wages < 0.0) {
      result.excluded.add("negative-wages", this_row);
      continue;
    }
    if ((config.year_min && *year < *config.year_min) || (config.year_max && *year > *config.year_max)) {
      result.excluded.add("year-out-of-range", this_row);
      continue;
    }
    if (deflator && !(*deflator > 0.0)) {
      result.excluded.add("nonpositive-deflator", this_row);
      continue;
    }

    PlantRecord r;
    r.industry_code = std::string(trim(f[c_code]));
    r.state = std::string(trim(f[c_state]));
    r.year = *year;
    r.value_added = *va;
    r.workers = *workers;
    r.capital = *capital;
    r.wages = wages;
    if (deflator) {
      r.value_added /= *deflator;
      r.capital /= *deflator;
      if (r.wages) *r.wages /= *deflator;
    }
    result.records.push_back(std::move(r));
  }
  return result;
}

IngestResult ingest(const std::filesystem::path& path, const IngestConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  return ingest(in, config);
}

void write_records(std::ostream& out, std::span<const PlantRecord> records) {
  const ColumnMap cm;
  out << cm.industry_code << ',' << cm.state << ',' << cm.year << ',' << cm.value_added << ','
      << cm.workers << ',' << cm.capital << ',' << cm.wages << '\n';
  for (const PlantRecord& r : records) {
    out << csv_field(r.industry_code) << ',' << csv_field(r.state) << ',' << r.year << ','
        << format_double(r.value_added) << ',' << format_double(r.workers) << ','
        << format_double(r.capital) << ',';
    if (r.wages) out << format_double(*r.wages);
    out << '\n';
  }
}

void validate(const SynthConfig& cfg) {
  validate_shape(cfg.params);
  if (cfg.n < 1) throw Error(ErrorCode::invalid_parameter, "n must be >= 1");
  if (!(cfg.x_low > 0.0) || !(cfg.x_high > cfg.x_low) || !std::isfinite(cfg.x_high)) {
    throw Error(ErrorCode::invalid_parameter, "need 0 < x_low < x_high");
  }
  if (!(cfg.labor_low > 0.0) || !(cfg.labor_high >= cfg.labor_low) || !std::isfinite(cfg.labor_high)) {
    throw Error(ErrorCode::invalid_parameter, "need 0 < labor_low <= labor_high");
  }
  if (!(cfg.noise_sd >= 0.0) || !std::isfinite(cfg.noise_sd)) {
    throw Error(ErrorCode::invalid_parameter, "noise_sd must be finite and >= 0");
  }
}

std::vector<PlantRecord> generate(const SynthConfig& cfg, SynthDiagnostics* diagnostics) {
  validate(cfg);
  boost::random::mt19937_64 engine(cfg.seed);
  boost::random::uniform_01<double> uniform;
  boost::random::normal_distribution<double> normal(0.0, 1.0);

  const double ln_l0 = std::log(cfg.labor_low);
  const double ln_l1 = std::log(cfg.labor_high);
  const double ln_x0 = std::log(cfg.x_low);
  const double ln_x1 = std::log(cfg.x_high);

  std::vector<PlantRecord> out;
  out.reserve(cfg.n);
  SynthDiagnostics diag;
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const double u_l = uniform(engine);
    const double u_x = uniform(engine);
    const double z = normal(engine);

    const double L = std::exp(ln_l0 + u_l * (ln_l1 - ln_l0));
    const double K = std::exp(ln_x0 + u_x * (ln_x1 - ln_x0)) * L;
    const double X = K / L;

    PlantRecord r;
    r.industry_code = cfg.industry_code;
    r.state = cfg.state;
    r.year = cfg.year;
    r.workers = L;
    r.capital = K;
    r.value_added = L * std::exp(log_ves_intensive(cfg.params, X) + cfg.noise_sd * z);
    if (cfg.competitive_wages) {
      const FactorPrices fp = factor_prices(cfg.params, X);
      if (!fp.competitive) ++diag.negative_wage_rows;
      r.wages = std::abs(fp.wage) * L;
    }
    out.push_back(std::move(r));
  }
  if (diagnostics) *diagnostics = diag;
  return out;
}

}  // namespace ves

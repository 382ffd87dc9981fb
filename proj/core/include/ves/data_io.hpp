#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ves/exclusion.hpp"
#include "ves/production.hpp"

namespace ves {

/// One plant-year observation. Money columns are Rs millions.
struct PlantRecord {
  std::string industry_code;
  std::string state;
  int year = 0;
  double value_added = 0.0;
  double workers = 0.0;
  double capital = 0.0;
  std::optional<double> wages;  // total wage bill
};

bool operator==(const PlantRecord& a, const PlantRecord& b);

/// CSV header names. Defaults are the canonical schema that write_records emits.
struct ColumnMap {
  std::string industry_code = "industry_code";
  std::string state = "state";
  std::string year = "year";
  std::string value_added = "value_added";
  std::string workers = "workers";
  std::string capital = "capital";
  std::string wages = "wages";  // optional column
  /// Optional price-index column; only read when `IngestConfig::apply_deflator`.
  std::string deflator = "deflator";
};

struct IngestConfig {
  ColumnMap columns;
  std::optional<int> year_min;
  std::optional<int> year_max;
  /// Divide value added, capital and wages by the deflator column. Off by default.
  bool apply_deflator = false;
};

struct IngestResult {
  std::vector<PlantRecord> records;
  ExclusionReport excluded;  // row indices count data rows from 0
};

/// Reads a header-first CSV. Numbers use '.' as the decimal separator
/// regardless of locale. Throws schema (missing mandatory column) or
/// empty_input (no header).
IngestResult ingest(std::istream& in, const IngestConfig& config = {});
IngestResult ingest(const std::filesystem::path& path, const IngestConfig& config = {});

/// Writes the canonical schema; doubles use the shortest round-trip form.
void write_records(std::ostream& out, std::span<const PlantRecord> records);

/// Splits one CSV line; handles double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(const std::string& line);

/// Quotes a field when it contains a separator, quote or line break.
std::string csv_field(const std::string& value);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

struct SynthConfig {
  VesParams params;
  std::size_t n = 100;
  double x_low = 0.25;   // capital intensity K/L drawn log-uniform in [x_low, x_high]
  double x_high = 4.0;
  double noise_sd = 0.0;  // sd of the additive disturbance on ln(V/L)
  std::uint64_t seed = 42;
  bool competitive_wages = true;
  double labor_low = 10.0;  // L drawn log-uniform in [labor_low, labor_high]
  double labor_high = 1000.0;
  std::string industry_code = "999";
  std::string state = "SYN";
  int year = 2016;
};

void validate(const SynthConfig& cfg);

struct SynthDiagnostics {
  /// Rows whose marginal product of labor f - X f' is negative; their wage
  /// bill is written as |W| L.
  std::size_t negative_wage_rows = 0;
};

/// Draws records from the VES technology in `cfg.params` with
/// boost::random::mt19937_64 seeded by cfg.seed. Per record, in order:
/// u_L, u_X ~ U(0,1) and z ~ N(0,1); L and X are log-uniform, K = X L,
/// V = L f(K/L) exp(noise_sd z), wages = |f - X f'| L.
std::vector<PlantRecord> generate(const SynthConfig& cfg, SynthDiagnostics* diagnostics = nullptr);

}  // namespace ves

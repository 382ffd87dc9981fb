#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ves/data_io.hpp"
#include "ves/exclusion.hpp"
#include "ves/linearization.hpp"
#include "ves/production.hpp"
#include "ves/regression.hpp"

namespace ves {

enum class MuRoute { wage, inversion };

std::string_view to_string(MuRoute route);
MuRoute parse_mu_route(std::string_view text);

struct PipelineConfig {
  /// Shape models to fit; polynomial is degree-selected up to max_degree.
  std::vector<ModelKind> models{ModelKind::polynomial, ModelKind::exponential, ModelKind::power};
  int max_degree = 4;
  bool wage_models = true;
  InversionOptions inversion;
};

struct CompareConfig {
  double sigma_threshold = 0.5;  // priority needs sigma strictly above this
  double sigma_max = 1.0;        // admissible band is (0, sigma_max]
  MuRoute mu_route = MuRoute::wage;
};

struct GroupEstimate {
  std::string industry_code;  // value of the group-by column
  std::size_t n_used = 0;
  std::size_t n_excluded = 0;
  ExclusionReport excluded;
  std::map<ModelSpec, FitResult> fits;       // shape models
  ModelSpec best;                            // minimum AIC among `fits`
  std::map<ModelSpec, FitResult> wage_fits;  // wage_three_var, wage_two_var
  std::optional<double> mu_wage_route;       // c of the three-variable wage fit
  std::optional<double> mu_inversion_route;  // mu from inverting the polynomial
  std::optional<double> sigma_ces;           // b of the two-variable wage fit
  std::optional<HlForm> hl;
  std::optional<VesParams> inverted_params;
  std::vector<std::string> diagnostics;
};

/// Intensive-form observation of a record: Y = V/L, X = K/L, W = wages/L.
Observation to_observation(const PlantRecord& r);

/// Fits every configured model for one group. Partial failures (a skipped
/// degree, a non-invertible polynomial, a missing wage column) become
/// diagnostics; only a group with no usable shape fit throws.
GroupEstimate estimate_group(std::string group_key, std::span<const PlantRecord> rows,
                             const PipelineConfig& config = {});

struct IndustryComparison {
  std::string industry_code;
  std::optional<double> sigma_ces;
  std::optional<double> mu_ves;
  std::optional<MuRoute> mu_source;
  bool theoretically_reasonable = false;
  bool priority = false;
};

/// One point per group: reasonable = 0 < sigma <= sigma_max; priority =
/// reasonable && sigma > sigma_threshold && mu > 0. Sorted by sigma
/// descending, groups without sigma last, ties by code.
std::vector<IndustryComparison> compare_groups(std::span<const GroupEstimate> estimates,
                                               const CompareConfig& config = {});

struct CapitalCell {
  std::string state;
  std::string industry_code;
  double invested_capital = 0.0;  // Rs millions
};

struct CapitalSummary {
  std::vector<CapitalCell> cells;
  std::size_t excluded_year_rows = 0;
  std::size_t unknown_state_rows = 0;
};

/// Indian state and union-territory names and ISO 3166-2:IN codes, case-insensitive.
bool is_known_state(std::string_view state);

/// Total capital per (state, industry code) for `year` (all years when absent),
/// ordered by state then code.
CapitalSummary capital_by_state(std::span<const PlantRecord> rows, std::optional<int> year = {});

inline constexpr double kMuTolerance = 1e-6;

/// "capital-intensive-production-indicated", "ces-equivalent" or
/// "labor-intensive-indicated". Throws on non-finite mu.
std::string_view mu_interpretation(double mu, double tolerance = kMuTolerance);

enum class GroupBy { industry_code, state, year };

std::string_view to_string(GroupBy g);
GroupBy parse_group_by(std::string_view text);

struct GroupFailure {
  std::string group;
  std::string code;
  std::string message;
};

struct BatchOptions {
  GroupBy group_by = GroupBy::industry_code;
  PipelineConfig pipeline;
  CompareConfig compare;
  std::optional<int> year;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct BatchReport {
  std::vector<GroupEstimate> groups;
  std::vector<GroupFailure> failures;
  std::vector<IndustryComparison> comparisons;
  ExclusionReport exclusion_summary;
  BatchOptions options;
};

/// Groups the records, estimates every group (concurrently when
/// options.threads > 1) and compares them. Output order depends only on the
/// group keys, never on the schedule.
BatchReport run_batch(std::span<const PlantRecord> records, const BatchOptions& options);

}  // namespace ves

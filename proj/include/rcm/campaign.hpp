#pragma once

#include "rcm/analysis.hpp"
#include "rcm/models.hpp"
#include "rcm/theory.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace rcm {

/// Bad configuration; `field` names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CampaignMetric { Torus, Square, Coupled };
enum class OutputFormat { Csv, Json };

std::string_view to_string(CampaignMetric m) noexcept;
CampaignMetric campaign_metric_from_string(std::string_view s);

struct ModelSpec {
    std::string kind = "unit_disk"; // unit_disk | gaussian | log_normal | table
    double sigma_db = 0.0;
    double eta = 0.0;
    std::vector<Knot> knots;
    std::string table_file;
    std::optional<double> truncation_epsilon;
    std::optional<double> cutoff;
};

struct CampaignConfig {
    ModelSpec model;
    std::vector<double> rho_list;
    std::vector<double> b_list;
    CampaignMetric metric = CampaignMetric::Torus;
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 0;
    double epsilon = 0.25;
    std::string output_path;
    OutputFormat format = OutputFormat::Csv;
    bool exact = false;
    bool theory = true;
};

/// Strict parse: unknown keys, wrong types and empty lists are ConfigErrors.
CampaignConfig parse_config(const nlohmann::json& doc);
CampaignConfig load_config(const std::filesystem::path& path);

/// Builds the model; relative table paths resolve against base_dir.
ConnectionModel build_model(const ModelSpec& spec, const std::filesystem::path& base_dir = {});

/// Seed of one (rho, b) cell, independent of the cell's position in the lists.
std::uint64_t cell_seed(std::uint64_t master_seed, double rho, double b) noexcept;

struct TrialRow {
    double rho = 0.0;
    double b = 0.0;
    CampaignMetric metric = CampaignMetric::Torus;
    TrialRecord record;

    friend bool operator==(const TrialRow&, const TrialRow&) = default;
};

/// Per-(rho, b) aggregate of the trials plus the matching theory.
struct CellSummary {
    double rho = 0.0;
    double b = 0.0;
    CampaignMetric metric = CampaignMetric::Torus;
    bool skipped = false;
    std::string reason;
    std::uint64_t trials = 0;

    double mean_isolated = 0.0;
    double var_isolated = 0.0;
    double ci99_isolated = 0.0;
    double p_no_isolated = 0.0;
    double ci99_p_no_isolated = 0.0;
    double frac_connected = 0.0;
    double ci99_connected = 0.0;
    double mean_degree = 0.0;
    double ci99_degree = 0.0;
    double tv_to_poisson = 0.0;
    // coupled runs only
    double mean_isolated_boundary = 0.0;
    double ci99_isolated_boundary = 0.0;

    bool theory_ok = false;
    std::string theory_note;
    TheoryReport theory;
    bool chen_stein_ok = false;
    double epsilon = 0.25;
    ChenSteinTerms chen_stein;
};

struct CampaignResult {
    std::vector<TrialRow> rows;
    std::vector<CellSummary> cells;
    std::vector<std::string> warnings;
};

struct RunOptions {
    unsigned workers = 1;
    /// When set, every trial graph is written there as an edge list.
    std::optional<std::filesystem::path> dump_dir;
};

/// Two-sided 99% normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

/// Runs every (rho, b, trial) unit; output is identical for any worker count.
CampaignResult run_campaign(const CampaignConfig& config, const ConnectionModel& model,
                            const RunOptions& opt = {});

/// Aggregates the rows of one cell (theory fields untouched).
void summarise(CellSummary& cell, const std::vector<TrialRow>& rows);

void write_trials_csv(std::ostream& out, const std::vector<TrialRow>& rows);
std::vector<TrialRow> read_trials_csv(std::istream& in);
void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& cells);
nlohmann::json to_json(const CampaignResult& result);

/// Summary path for CSV output: "<stem>_summary<ext>" next to the trial table.
std::filesystem::path summary_path(const std::filesystem::path& output);

/// Writes the result in the configured format; throws IoError.
void persist(const CampaignResult& result, const std::filesystem::path& output, OutputFormat format);

/// Text rendering of a theory report and Chen-Stein terms, one "key value" per line.
std::string format_theory(const ConnectionModel& model, double rho, double b,
                          const TheoryReport& report, const std::optional<ChenSteinTerms>& cs,
                          double epsilon);

} // namespace rcm

#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rainbow/graph.hpp"
#include "rainbow/thresholds.hpp"
#include "rainbow/tree_grower.hpp"

namespace rainbow {

enum class Measure { Diameter, Rainbow, TreePaths };

std::string to_string(Measure m);
Measure parse_measure(const std::string& text);

/// Monte Carlo sweep over p = multiplier * p*, where p* is the threshold of
/// the parity of d (p1 odd, p2 even).
struct SweepConfig {
    std::vector<std::pair<std::size_t, std::size_t>> sizes;
    std::size_t d = 2;
    std::size_t k = 1;
    std::optional<std::size_t> num_colors;  // default d+1
    std::optional<std::size_t> max_len;     // default d+1
    std::vector<double> multipliers;
    std::size_t trials = 1;
    Seed master_seed = 1;
    std::set<Measure> measures{Measure::Diameter, Measure::Rainbow};
    std::optional<BranchOverride> tree_override;
    /// One uniform and one color per potential pair, shared by all multipliers.
    bool coupled = true;
    double c0 = 1.0;
    double epsilon = 0.5;
    /// 0 means: hardware concurrency, capped by RAINBOW_THREADS when set.
    std::size_t threads = 0;

    std::size_t colors() const noexcept { return num_colors.value_or(d + 1); }
    std::size_t path_bound() const noexcept { return max_len.value_or(d + 1); }
    bool measures_has(Measure m) const { return measures.contains(m); }

    /// Throws std::invalid_argument on empty sizes or multipliers, a
    /// non-positive or unsorted multiplier list, trials == 0, d < 2, k == 0,
    /// or partite sizes below 2.
    void validate() const;
};

/// Parses "key = value" lines (# comments allowed) or a JSON object with the
/// same keys: sizes, d, k, num_colors, max_len, multipliers, trials,
/// master_seed, measures, tree_even_branch, tree_odd_branch, coupled, c0,
/// epsilon, threads. Multipliers accept a list or "geom:START:STOP:COUNT"
/// (log-spaced, both ends included).
SweepConfig parse_config(const std::string& text);
SweepConfig load_config(const std::string& path);

/// count log-spaced values from start to stop inclusive.
std::vector<double> geometric_grid(double start, double stop, std::size_t count);

struct Seeds {
    Seed graph = 0;
    Seed coloring = 0;
    Seed tree = 0;

    friend bool operator==(const Seeds&, const Seeds&) = default;
};

/// Seeds for one trial. Coupled sweeps ignore p so every multiplier sees the
/// same draws.
Seeds trial_seeds(const SweepConfig& cfg, std::size_t size_index, double p, std::size_t trial_index);

struct TrialRecord {
    std::size_t size_index = 0;
    std::size_t trial_index = 0;
    double p = 0;
    Seeds seeds;
    std::size_t edges = 0;

    bool diameter_measured = false;
    std::optional<std::size_t> diameter;  // nullopt: infinite
    std::optional<bool> diam_ok;          // diameter <= d+1

    std::optional<bool> rainbow_ok;
    std::optional<std::pair<Vertex, Vertex>> failing_pair;

    std::optional<std::size_t> tree_paths;  // min over the probe pairs
    std::vector<std::size_t> tree_paths_per_pair;

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// One trial: sample (coupled or not), then take the requested measures.
/// The rainbow certificate is a random num_colors coloring under which every
/// pair has k internally disjoint rainbow paths of length <= max_len; it is
/// skipped (false) when the measured diameter already exceeds max_len.
TrialRecord run_trial(const SweepConfig& cfg, std::size_t size_index, double p, std::size_t trial_index);

struct Interval {
    double low = 0;
    double high = 0;
};

/// Wilson score interval at z = 1.959963984540054 (95%).
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

struct PointResult {
    std::size_t size_index = 0;
    std::size_t m = 0, n = 0;
    std::size_t multiplier_index = 0;
    double multiplier = 0;
    double p = 0;
    bool clamped = false;
    std::size_t trials = 0;
    std::size_t diam_successes = 0;
    std::size_t rainbow_successes = 0;
    double tree_paths_sum = 0;
    std::optional<std::size_t> tree_paths_min;
    std::vector<TrialRecord> records;

    double diam_rate(const SweepConfig& cfg) const;     // NaN when not measured
    double rainbow_rate(const SweepConfig& cfg) const;  // NaN when not measured
    double mean_tree_paths(const SweepConfig& cfg) const;
    /// CI reported in the CSV: rainbow when measured, else diameter.
    Interval headline_interval(const SweepConfig& cfg) const;
};

struct SweepResult {
    SweepConfig config;
    std::vector<PointResult> points;  // size-major, multipliers ascending
    double wall_seconds = 0;          // not part of any persisted comparison

    std::vector<const PointResult*> points_for(std::size_t size_index) const;
};

/// Folds trial records into a point. Order of records does not matter.
PointResult aggregate(const SweepConfig& cfg, std::size_t size_index, std::size_t multiplier_index,
                      std::vector<TrialRecord> records);

/// Runs every (size, multiplier, trial). on_point is called once per point,
/// in result order, as soon as the point's size is complete.
SweepResult run_sweep(const SweepConfig& cfg, const std::function<void(const PointResult&)>& on_point = {});

std::size_t resolve_threads(std::size_t requested);

struct Crossing {
    double multiplier = 0;
    std::size_t lower_index = 0;  // bracketing points
    std::size_t upper_index = 0;
};

/// First place where the rate sequence passes `level`, linearly
/// interpolated in the multiplier. nullopt when it never spans the level.
std::optional<Crossing> estimate_crossing(std::span<const double> multipliers, std::span<const double> rates,
                                          double level = 0.5);
std::optional<Crossing> estimate_crossing(const SweepResult& result, Measure measure, std::size_t size_index,
                                          double level = 0.5);

/// Multiplier span between the low and high level crossings.
std::optional<double> transition_width(std::span<const double> multipliers, std::span<const double> rates,
                                       double low = 0.1, double high = 0.9);

inline constexpr const char* kCsvHeader =
    "m,n,d,k,num_colors,multiplier,p,trials,diam_rate,rainbow_rate,mean_tree_paths,ci_low,ci_high,master_seed,clamped";

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const SweepConfig& cfg, const PointResult& point);
void write_csv(std::ostream& out, const SweepResult& result);

struct CsvRow {
    std::size_t m = 0, n = 0, d = 0, k = 0, num_colors = 0;
    double multiplier = 0, p = 0;
    std::size_t trials = 0;
    double diam_rate = 0, rainbow_rate = 0, mean_tree_paths = 0, ci_low = 0, ci_high = 0;
    Seed master_seed = 0;
    bool clamped = false;
};

/// Reads a sweep CSV; throws std::runtime_error naming the offending line
/// on a header mismatch or malformed row.
std::vector<CsvRow> read_csv(std::istream& in);

nlohmann::json to_json(const SweepConfig& cfg);
nlohmann::json to_json(const SweepResult& result, bool verbose);

}  // namespace rainbow

#ifndef GRIDSTACK_DATA_INGEST_HPP
#define GRIDSTACK_DATA_INGEST_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridstack/core_model.hpp"

namespace gridstack {

struct GenerationRecord {
    int month = 0;
    int day = 0;
    double value = 0.0;
};

class IngestError : public std::runtime_error {
public:
    enum class Kind { IncompletePanel, EmptySupport, BadRecord };

    IngestError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Index of the support level nearest to `deviation`; an exact tie goes to the
/// numerically lower level.
int snap_to_level(double deviation, const std::vector<double>& support);

struct TransitionEstimate {
    Eigen::MatrixXd matrix;
    /// Rows with no observed transition; they are set to uniform.
    std::vector<int> unvisited_rows;
};

/// Empirical transition frequencies from sequences of support-level indices:
/// row w counts consecutive pairs leaving w, divided by the number of pairs
/// leaving w.
TransitionEstimate estimate_transition(const std::vector<std::vector<int>>& level_sequences,
                                       int num_levels);

/// Same, from sequences of deviations that are snapped to the support first.
TransitionEstimate estimate_transition(const std::vector<std::vector<double>>& deviation_sequences,
                                       const std::vector<double>& support);

struct ChainEstimate {
    ForecastChain chain;
    std::vector<int> unvisited_rows;
    /// Snapped level index per (month, day).
    Eigen::MatrixXi levels;
};

/// Scales the panel, predicts each day by its mean over months, snaps the
/// deviations to the support and estimates the transition. The initial
/// distribution is uniform.
ChainEstimate estimate_forecast_and_chain(const std::vector<GenerationRecord>& records, double scale,
                                          const std::vector<double>& support);

/// Reads a `month,day,value` CSV with a header row.
std::vector<GenerationRecord> read_generation_csv(const std::string& path);

} // namespace gridstack

#endif

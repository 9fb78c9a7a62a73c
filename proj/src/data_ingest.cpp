#include "gridstack/data_ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gridstack {

int snap_to_level(double deviation, const std::vector<double>& support) {
    if (support.empty()) {
        throw IngestError(IngestError::Kind::EmptySupport, "support levels are empty");
    }
    int best = 0;
    double best_dist = std::abs(deviation - support[0]);
    for (int k = 1; k < static_cast<int>(support.size()); ++k) {
        const double dist = std::abs(deviation - support[k]);
        if (dist < best_dist || (dist == best_dist && support[k] < support[best])) {
            best = k;
            best_dist = dist;
        }
    }
    return best;
}

TransitionEstimate estimate_transition(const std::vector<std::vector<int>>& level_sequences,
                                       int num_levels) {
    if (num_levels < 1) {
        throw IngestError(IngestError::Kind::EmptySupport, "support levels are empty");
    }
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(num_levels, num_levels);
    for (const auto& seq : level_sequences) {
        for (std::size_t d = 0; d + 1 < seq.size(); ++d) {
            counts(seq[d], seq[d + 1]) += 1.0;
        }
    }
    TransitionEstimate out;
    out.matrix = Eigen::MatrixXd::Zero(num_levels, num_levels);
    for (int w = 0; w < num_levels; ++w) {
        const double leaving = counts.row(w).sum();
        if (leaving == 0.0) {
            out.matrix.row(w).setConstant(1.0 / num_levels);
            out.unvisited_rows.push_back(w);
        } else {
            out.matrix.row(w) = counts.row(w) / leaving;
        }
    }
    return out;
}

TransitionEstimate estimate_transition(const std::vector<std::vector<double>>& deviation_sequences,
                                       const std::vector<double>& support) {
    std::vector<std::vector<int>> levels;
    levels.reserve(deviation_sequences.size());
    for (const auto& seq : deviation_sequences) {
        std::vector<int> snapped;
        snapped.reserve(seq.size());
        for (double x : seq) snapped.push_back(snap_to_level(x, support));
        levels.push_back(std::move(snapped));
    }
    return estimate_transition(levels, static_cast<int>(support.size()));
}

ChainEstimate estimate_forecast_and_chain(const std::vector<GenerationRecord>& records, double scale,
                                          const std::vector<double>& support) {
    if (support.empty()) {
        throw IngestError(IngestError::Kind::EmptySupport, "support levels are empty");
    }
    std::set<int> month_set;
    std::set<int> day_set;
    for (const auto& r : records) {
        month_set.insert(r.month);
        day_set.insert(r.day);
    }
    if (records.empty()) {
        throw IngestError(IngestError::Kind::IncompletePanel, "no generation records");
    }
    const std::vector<int> months(month_set.begin(), month_set.end());
    const std::vector<int> days(day_set.begin(), day_set.end());
    const int M = static_cast<int>(months.size());
    const int T = static_cast<int>(days.size());
    std::map<int, int> month_pos;
    std::map<int, int> day_pos;
    for (int k = 0; k < M; ++k) month_pos[months[k]] = k;
    for (int k = 0; k < T; ++k) day_pos[days[k]] = k;

    Eigen::MatrixXd values(M, T);
    Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(M, T);
    for (const auto& r : records) {
        const int a = month_pos[r.month];
        const int b = day_pos[r.day];
        if (seen(a, b)++ > 0) {
            throw IngestError(IngestError::Kind::IncompletePanel,
                              "duplicate record for month " + std::to_string(r.month) + " day " +
                                  std::to_string(r.day));
        }
        values(a, b) = r.value * scale;
    }
    if ((seen.array() == 0).any()) {
        throw IngestError(IngestError::Kind::IncompletePanel,
                          "panel is missing " + std::to_string((seen.array() == 0).count()) +
                              " of " + std::to_string(M * T) + " (month, day) records");
    }

    const Eigen::RowVectorXd predicted = values.colwise().mean();
    ChainEstimate out;
    out.levels.resize(M, T);
    std::vector<std::vector<int>> sequences(M, std::vector<int>(T));
    for (int a = 0; a < M; ++a) {
        for (int b = 0; b < T; ++b) {
            sequences[a][b] = snap_to_level(values(a, b) - predicted[b], support);
            out.levels(a, b) = sequences[a][b];
        }
    }
    auto estimate = estimate_transition(sequences, static_cast<int>(support.size()));
    out.unvisited_rows = estimate.unvisited_rows;
    out.chain.predicted.assign(predicted.data(), predicted.data() + T);
    out.chain.error_support = support;
    out.chain.transition = {estimate.matrix};
    const int m = static_cast<int>(support.size());
    out.chain.initial_dist = Eigen::VectorXd::Constant(m, 1.0 / m);
    return out;
}

std::vector<GenerationRecord> read_generation_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IngestError(IngestError::Kind::BadRecord, "cannot open " + path);
    }
    std::vector<GenerationRecord> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "month,day,value") {
                throw IngestError(IngestError::Kind::BadRecord,
                                  path + ": expected header month,day,value");
            }
            continue;
        }
        std::istringstream fields(line);
        std::string month, day, value;
        if (!std::getline(fields, month, ',') || !std::getline(fields, day, ',') ||
            !std::getline(fields, value)) {
            throw IngestError(IngestError::Kind::BadRecord,
                              path + ":" + std::to_string(line_no) + ": expected three fields");
        }
        try {
            GenerationRecord r{std::stoi(month), std::stoi(day), std::stod(value)};
            if (r.value < 0.0) throw std::invalid_argument("negative");
            out.push_back(r);
        } catch (const std::exception&) {
            throw IngestError(IngestError::Kind::BadRecord,
                              path + ":" + std::to_string(line_no) + ": malformed record");
        }
    }
    return out;
}

} // namespace gridstack

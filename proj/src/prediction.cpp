#include "icps/prediction.hpp"

#include <algorithm>
#include <cmath>

namespace icps {

std::int64_t concurrency_history::application_concurrency(int interval) const {
    const auto& row = per_type.at(interval);
    std::int64_t sum = 0;
    for (auto v : row) sum += v;
    return sum;
}

void concurrency_history::push_interval(std::vector<std::int64_t> type_counts,
                                        std::vector<std::int64_t> function_creations) {
    if (static_cast<int>(type_counts.size()) != type_count ||
        static_cast<int>(function_creations.size()) != function_count)
        throw dimension_mismatch("history row dims mismatch");
    std::int64_t total = 0;
    for (auto v : function_creations) total += v;
    per_type.push_back(std::move(type_counts));
    creations_per_function.push_back(std::move(function_creations));
    creations_total.push_back(total);
}

std::vector<double> naive_predictor::forecast(const concurrency_history& hist) {
    if (hist.intervals() == 0) throw empty_history();
    const auto& last = hist.per_type.back();
    return std::vector<double>(last.begin(), last.end());
}

lstm_series lstm_predictor::window(const concurrency_history& hist, int series_length) {
    lstm_series series;
    series.reserve(series_length);
    const int have = hist.intervals();
    for (int k = 0; k < series_length; ++k) {
        const int idx = have - series_length + k;
        Eigen::VectorXd x = Eigen::VectorXd::Zero(hist.type_count);
        if (idx >= 0) {
            for (int s = 0; s < hist.type_count; ++s)
                x(s) = static_cast<double>(hist.per_type[idx][s]);
        }
        series.push_back(std::move(x));
    }
    return series;
}

std::vector<double> lstm_predictor::forecast(const concurrency_history& hist) {
    if (hist.intervals() == 0) throw empty_history();
    if (hist.type_count != model_.input_dim())
        throw dimension_mismatch("history type count != model input dim");
    Eigen::VectorXd y = model_.forward(window(hist, series_length_));
    return std::vector<double>(y.data(), y.data() + y.size());
}

std::vector<std::int64_t> predict_workflow_concurrency(
    const concurrency_history& hist, concurrency_predictor& predictor) {
    if (hist.intervals() == 0) throw empty_history();
    std::vector<double> raw = predictor.forecast(hist);
    std::vector<std::int64_t> out(raw.size());
    for (size_t s = 0; s < raw.size(); ++s) {
        const double clamped = std::max(0.0, raw[s]);
        out[s] = static_cast<std::int64_t>(std::ceil(clamped));
    }
    return out;
}

prewarm_plan plan_fpcg(const std::vector<std::int64_t>& forecast,
                       const validated_application& app) {
    std::int64_t total = 0;
    for (auto v : forecast) total += v;
    prewarm_plan plan;
    plan.counts.assign(app.size(), total);
    return plan;
}

prewarm_plan plan_bpcg(const std::vector<std::int64_t>& forecast,
                       const std::vector<workflow_type>& types, int function_count) {
    prewarm_plan plan;
    plan.counts.assign(function_count, 0);
    for (const auto& type : types) {
        if (type.id < 1 || type.id > static_cast<int>(forecast.size()))
            throw dimension_mismatch("type id outside forecast range");
        const std::int64_t con = forecast[type.id - 1];
        for (int fn : type.members) plan.counts.at(fn) += con;
    }
    return plan;
}

prewarm_plan plan_chscg(const concurrency_history& hist, int window_intervals) {
    if (hist.intervals() == 0) throw empty_history();
    prewarm_plan plan;
    plan.counts.assign(hist.function_count, 0);

    const std::int64_t tn = hist.creations_total.back();
    if (tn == 0) return plan;

    const int first = std::max(0, hist.intervals() - window_intervals);
    std::vector<std::int64_t> window_counts(hist.function_count, 0);
    std::int64_t window_total = 0;
    for (int k = first; k < hist.intervals(); ++k) {
        for (int fn = 0; fn < hist.function_count; ++fn) {
            window_counts[fn] += hist.creations_per_function[k][fn];
            window_total += hist.creations_per_function[k][fn];
        }
    }
    if (window_total == 0) return plan;
    for (int fn = 0; fn < hist.function_count; ++fn) {
        // ceil(q_n * TN) with q_n = window_counts / window_total, exactly
        plan.counts[fn] =
            (window_counts[fn] * tn + window_total - 1) / window_total;
    }
    return plan;
}

}  // namespace icps

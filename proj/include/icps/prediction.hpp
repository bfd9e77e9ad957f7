#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "icps/lstm.hpp"
#include "icps/workflow.hpp"

namespace icps {

class empty_history : public std::runtime_error {
  public:
    empty_history() : std::runtime_error("concurrency history covers no interval") {}
};

// Per-interval observations: workflow concurrency per type (arrivals within
// the interval) and instance-creation counts per function. Only closed
// intervals are recorded.
struct concurrency_history {
    int type_count = 0;
    int function_count = 0;
    std::vector<std::vector<std::int64_t>> per_type;        // interval x type
    std::vector<std::int64_t> creations_total;              // TN per interval
    std::vector<std::vector<std::int64_t>> creations_per_function;

    int intervals() const { return static_cast<int>(per_type.size()); }
    std::int64_t application_concurrency(int interval) const;  // sum over types

    void push_interval(std::vector<std::int64_t> type_counts,
                       std::vector<std::int64_t> function_creations);
};

// Number of instances to hold warm per function for the next interval.
struct prewarm_plan {
    std::vector<std::int64_t> counts;  // indexed by function

    std::int64_t count(int fn) const { return counts.at(fn); }
};

// Raw per-type forecasters. Integer conversion (clamp at zero, then ceiling)
// happens in predict_workflow_concurrency, uniformly for every model.
class concurrency_predictor {
  public:
    virtual ~concurrency_predictor() = default;
    virtual std::vector<double> forecast(const concurrency_history& hist) = 0;
};

// Last closed interval carried forward.
class naive_predictor : public concurrency_predictor {
  public:
    std::vector<double> forecast(const concurrency_history& hist) override;
};

class lstm_predictor : public concurrency_predictor {
  public:
    lstm_predictor(lstm_model model, int series_length)
        : model_(std::move(model)), series_length_(series_length) {}

    std::vector<double> forecast(const concurrency_history& hist) override;

    // History shorter than the series length is left-padded with zeros.
    static lstm_series window(const concurrency_history& hist, int series_length);

    const lstm_model& model() const { return model_; }

  private:
    lstm_model model_;
    int series_length_;
};

std::vector<std::int64_t> predict_workflow_concurrency(
    const concurrency_history& hist, concurrency_predictor& predictor);

// Every function of the application receives the type-summed concurrency.
prewarm_plan plan_fpcg(const std::vector<std::int64_t>& forecast,
                       const validated_application& app);

// Each function receives the concurrency of the types that invoke it.
prewarm_plan plan_bpcg(const std::vector<std::int64_t>& forecast,
                       const std::vector<workflow_type>& types, int function_count);

// Frequency statistics over a sliding window of recent intervals, scaled by
// the instance count of the last interval. Counts stay in integer arithmetic
// so the ceiling is exact.
prewarm_plan plan_chscg(const concurrency_history& hist, int window_intervals = 6);

}  // namespace icps

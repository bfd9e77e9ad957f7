#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "icps/lstm.hpp"
#include "icps/placement.hpp"
#include "icps/prediction.hpp"
#include "icps/routing.hpp"

namespace icps {

enum class prediction_strategy { fpcg, bpcg, chscg, none };
enum class predictor_kind { naive, lstm, http };
enum class baseline_mode { icps, keep_alive, pool };

struct lstm_settings {
    int hidden = 64;
    int series_length = 36;
    double learning_rate = 1e-3;
    int batch_size = 32;
    int epochs = 1000;
};

// The full policy selection for one run: the prediction/placement/routing
// strategy triple for the main scheduler, or one of the two self-contained
// baselines (cold start on demand with keep-alive decay; adaptive warm pool).
struct policy_bundle {
    baseline_mode mode = baseline_mode::icps;
    prediction_strategy prediction = prediction_strategy::bpcg;
    predictor_kind predictor = predictor_kind::naive;
    placement_strategy placement = placement_strategy::ads;
    routing_strategy routing = routing_strategy::sfepas;
    int pool_size = 2;
    int chscg_window = 6;
    lstm_settings lstm;
    std::string predictor_url;  // for predictor_kind::http
};

// Pre-warm delta rule: instances to create now so the live count reaches the
// plan. Surplus live instances are left to keep-alive decay.
std::int64_t prewarm_delta(std::int64_t planned, std::int64_t alive);

// Warm-pool adaptation, evaluated once per interval: any miss doubles the
// target, an untouched pool halves it (floor 1).
int pool_adapt(int target, bool missed, bool consumed);

const char* to_string(baseline_mode m);
const char* to_string(prediction_strategy s);
const char* to_string(predictor_kind k);
const char* to_string(placement_strategy s);
const char* to_string(routing_strategy s);

}  // namespace icps

#include "icps/scheduler.hpp"

#include <algorithm>

namespace icps {

std::int64_t prewarm_delta(std::int64_t planned, std::int64_t alive) {
    return std::max<std::int64_t>(0, planned - alive);
}

int pool_adapt(int target, bool missed, bool consumed) {
    if (missed) return target * 2;
    if (!consumed) return std::max(1, target / 2);
    return target;
}

const char* to_string(baseline_mode m) {
    switch (m) {
        case baseline_mode::icps: return "icps";
        case baseline_mode::keep_alive: return "keep_alive";
        case baseline_mode::pool: return "pool";
    }
    return "?";
}

const char* to_string(prediction_strategy s) {
    switch (s) {
        case prediction_strategy::fpcg: return "fpcg";
        case prediction_strategy::bpcg: return "bpcg";
        case prediction_strategy::chscg: return "chscg";
        case prediction_strategy::none: return "none";
    }
    return "?";
}

const char* to_string(predictor_kind k) {
    switch (k) {
        case predictor_kind::naive: return "naive";
        case predictor_kind::lstm: return "lstm";
        case predictor_kind::http: return "http";
    }
    return "?";
}

const char* to_string(placement_strategy s) {
    switch (s) {
        case placement_strategy::dlbds: return "dlbds";
        case placement_strategy::ads: return "ads";
        case placement_strategy::fdds: return "fdds";
    }
    return "?";
}

const char* to_string(routing_strategy s) {
    switch (s) {
        case routing_strategy::swpas: return "swpas";
        case routing_strategy::sfepas: return "sfepas";
        case routing_strategy::mncpas: return "mncpas";
    }
    return "?";
}

}  // namespace icps

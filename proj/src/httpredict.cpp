#include "icps/httpredict.hpp"

#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

namespace icps {

namespace {

nlohmann::json history_to_series(const concurrency_history& hist) {
    nlohmann::json series = nlohmann::json::array();
    for (const auto& row : hist.per_type) series.push_back(row);
    return series;
}

}  // namespace

http_predictor::http_predictor(std::string url) {
    // accepted forms: http://host:port[/path]
    const std::string prefix = "http://";
    if (url.rfind(prefix, 0) == 0) url = url.substr(prefix.size());
    auto slash = url.find('/');
    if (slash != std::string::npos) {
        path_ = url.substr(slash);
        url = url.substr(0, slash);
    }
    auto colon = url.find(':');
    if (colon != std::string::npos) {
        host_ = url.substr(0, colon);
        port_ = std::stoi(url.substr(colon + 1));
    } else {
        host_ = url;
    }
}

http_predictor::~http_predictor() = default;

std::vector<double> http_predictor::forecast(const concurrency_history& hist) {
    if (hist.intervals() == 0) throw empty_history();
    nlohmann::json body;
    body["series"] = history_to_series(hist);

    httplib::Client client(host_, port_);
    client.set_read_timeout(10, 0);
    auto res = client.Post(path_, body.dump(), "application/json");
    if (!res || res->status != 200)
        throw std::runtime_error("predictor endpoint unreachable: " + host_ + ":" +
                                 std::to_string(port_) + path_);
    nlohmann::json reply = nlohmann::json::parse(res->body);
    return reply.at("forecast").get<std::vector<double>>();
}

struct predictor_server::impl {
    httplib::Server server;
};

predictor_server::predictor_server(std::shared_ptr<concurrency_predictor> predictor)
    : impl_(std::make_unique<impl>()), predictor_(std::move(predictor)) {
    impl_->server.Post("/predict", [this](const httplib::Request& req,
                                          httplib::Response& res) {
        try {
            nlohmann::json body = nlohmann::json::parse(req.body);
            auto series = body.at("series").get<std::vector<std::vector<std::int64_t>>>();
            concurrency_history hist;
            hist.type_count = series.empty() ? 0 : static_cast<int>(series[0].size());
            hist.function_count = 0;
            for (auto& row : series) {
                hist.per_type.push_back(row);
                hist.creations_per_function.emplace_back();
                hist.creations_total.push_back(0);
            }
            std::vector<double> forecast = predictor_->forecast(hist);
            nlohmann::json reply;
            reply["forecast"] = forecast;
            res.set_content(reply.dump(), "application/json");
        } catch (const std::exception& e) {
            res.status = 400;
            res.set_content(std::string("{\"error\":\"") + e.what() + "\"}",
                            "application/json");
        }
    });
}

predictor_server::~predictor_server() { stop(); }

bool predictor_server::listen(const std::string& host, int port) {
    if (port == 0) {
        port_ = impl_->server.bind_to_any_port(host);
        if (port_ < 0) return false;
        return impl_->server.listen_after_bind();
    }
    port_ = port;
    return impl_->server.listen(host, port);
}

void predictor_server::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace icps

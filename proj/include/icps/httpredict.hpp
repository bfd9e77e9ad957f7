#pragma once

#include <memory>
#include <string>

#include "icps/prediction.hpp"

namespace icps {

// Out-of-process forecaster speaking JSON over HTTP:
//   POST /predict  {"series": [[per-type counts], ...]}
//   ->             {"forecast": [per-type values]}
// The in-process predictors remain the default; this client exists so an
// external model can be dropped in behind the same interface.
class http_predictor : public concurrency_predictor {
  public:
    explicit http_predictor(std::string url);
    ~http_predictor() override;

    std::vector<double> forecast(const concurrency_history& hist) override;

  private:
    std::string host_;
    int port_ = 80;
    std::string path_ = "/predict";
};

// Serves a predictor over the wire protocol above. Blocks until stop() is
// called from another thread. listen_port 0 picks a free port; the bound
// port is reported through bound_port().
class predictor_server {
  public:
    explicit predictor_server(std::shared_ptr<concurrency_predictor> predictor);
    ~predictor_server();

    bool listen(const std::string& host, int port);
    void stop();
    int bound_port() const { return port_; }

  private:
    struct impl;
    std::unique_ptr<impl> impl_;
    std::shared_ptr<concurrency_predictor> predictor_;
    int port_ = 0;
};

}  // namespace icps

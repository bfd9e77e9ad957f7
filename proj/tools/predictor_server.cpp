#include <csignal>
#include <cstdio>
#include <memory>

#include <CLI11.hpp>

#include "icps/httpredict.hpp"

using namespace icps;

namespace {
predictor_server* g_server = nullptr;
void handle_signal(int) {
    if (g_server) g_server->stop();
}
}  // namespace

// Reference out-of-process forecaster: answers the JSON-over-HTTP protocol
// with the carry-forward prediction. Swap in any service speaking the same
// protocol via the simulator's predictor_url setting.
int main(int argc, char** argv) {
    CLI::App app{"concurrency forecast endpoint"};
    std::string host = "127.0.0.1";
    int port = 8590;
    app.add_option("--host", host, "bind address");
    app.add_option("--port", port, "bind port");
    CLI11_PARSE(app, argc, argv);

    predictor_server server(std::make_shared<naive_predictor>());
    g_server = &server;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);

    std::printf("serving POST /predict on %s:%d\n", host.c_str(), port);
    if (!server.listen(host, port)) {
        std::fprintf(stderr, "failed to bind %s:%d\n", host.c_str(), port);
        return 1;
    }
    return 0;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "icps/lstm.hpp"

using namespace icps;

namespace {

lstm_series constant_series(int len, int dim, double value) {
    return lstm_series(len, Eigen::VectorXd::Constant(dim, value));
}

// max relative error between analytic gradients and central differences
double gradient_check(lstm_model& model, const lstm_series& series,
                      const Eigen::VectorXd& target, double eps) {
    lstm_model::gradients grads;
    model.loss_and_gradients(series, target, grads);
    std::vector<double> analytic = model.flatten_gradients(grads);
    std::vector<double*> params = model.parameter_refs();

    double worst = 0.0;
    lstm_model::gradients scratch;
    for (size_t k = 0; k < params.size(); ++k) {
        const double saved = *params[k];
        *params[k] = saved + eps;
        const double up = model.loss_and_gradients(series, target, scratch);
        *params[k] = saved - eps;
        const double down = model.loss_and_gradients(series, target, scratch);
        *params[k] = saved;
        const double numeric = (up - down) / (2.0 * eps);
        const double denom = std::max({std::abs(numeric), std::abs(analytic[k]), 1e-8});
        worst = std::max(worst, std::abs(numeric - analytic[k]) / denom);
    }
    return worst;
}

}  // namespace

TEST_CASE("zero weights force a zero forecast") {
    lstm_model m(3, 8);
    Eigen::VectorXd y = m.forward(constant_series(5, 3, 7.0));
    for (int i = 0; i < 3; ++i) CHECK(y(i) == 0.0);
}

TEST_CASE("hand-evaluated single cell") {
    // one step, one unit: i=sig(0.5), f=sig(-0.5), o=sig(0.4), g=tanh(0.6),
    // c=i*g, h=o*tanh(c), y=2h+0.5 evaluated by hand
    lstm_model m(1, 1);
    m.w_i(0, 0) = 0.5;
    m.w_f(0, 0) = -0.5;
    m.w_o(0, 0) = 0.3;
    m.b_o(0) = 0.1;
    m.w_g(0, 0) = 0.8;
    m.b_g(0) = -0.2;
    m.w_y(0, 0) = 2.0;
    m.b_y(0) = 0.5;
    Eigen::VectorXd y = m.forward({Eigen::VectorXd::Constant(1, 1.0)});
    CHECK(y(0) == doctest::Approx(0.8859998050301409).epsilon(1e-12));
}

TEST_CASE("series of length 36 with two types yields a two-dim output") {
    lstm_model m = lstm_model::random_init(2, 64, 42);
    Eigen::VectorXd y = m.forward(constant_series(36, 2, 3.0));
    CHECK(y.size() == 2);
    CHECK(std::isfinite(y(0)));
}

TEST_CASE("dimension mismatch is rejected") {
    lstm_model m(2, 4);
    CHECK_THROWS_AS(m.forward(constant_series(3, 5, 1.0)), dimension_mismatch);
    CHECK_THROWS_AS(m.forward({}), dimension_mismatch);
}

TEST_CASE("analytic gradients match central finite differences") {
    std::mt19937_64 seeds(123);
    for (int rep = 0; rep < 5; ++rep) {
        const int dim = 1 + static_cast<int>(seeds() % 3);
        lstm_model m = lstm_model::random_init(dim, 4, seeds());
        std::mt19937_64 rng(seeds());
        const int len = 2 + static_cast<int>(rng() % 4);
        lstm_series series;
        std::normal_distribution<double> dist(0.0, 1.0);
        for (int t = 0; t < len; ++t) {
            Eigen::VectorXd x(dim);
            for (int i = 0; i < dim; ++i) x(i) = dist(rng);
            series.push_back(x);
        }
        Eigen::VectorXd target(dim);
        for (int i = 0; i < dim; ++i) target(i) = dist(rng);
        CHECK(gradient_check(m, series, target, 1e-4) < 1e-4);
    }
}

TEST_CASE("zero learning rate leaves weights unchanged") {
    lstm_model m = lstm_model::random_init(2, 4, 9);
    const Eigen::MatrixXd before = m.w_i;
    const Eigen::VectorXd before_b = m.b_y;
    std::vector<lstm_sample> data{{constant_series(4, 2, 1.0),
                                   Eigen::VectorXd::Constant(2, 5.0)}};
    lstm_hyperparams hyper;
    hyper.learning_rate = 0.0;
    hyper.epochs = 10;
    lstm_train(m, data, hyper);
    CHECK(m.w_i == before);
    CHECK(m.b_y == before_b);
}

TEST_CASE("training fits a constant target") {
    lstm_model m = lstm_model::random_init(1, 8, 20240811);
    std::vector<lstm_sample> data;
    for (int k = 0; k < 8; ++k)
        data.push_back({constant_series(6, 1, 5.0), Eigen::VectorXd::Constant(1, 5.0)});
    lstm_hyperparams hyper;
    hyper.learning_rate = 0.05;
    hyper.batch_size = 8;
    hyper.epochs = 200;
    hyper.seed = 1;
    std::vector<double> history = lstm_train(m, data, hyper);
    CHECK(history.back() < 0.05);
    CHECK(history.front() > history.back());
}

TEST_CASE("training is deterministic for a fixed seed") {
    auto train_once = [] {
        lstm_model m = lstm_model::random_init(2, 6, 77);
        std::vector<lstm_sample> data;
        for (int k = 0; k < 10; ++k) {
            data.push_back({constant_series(4, 2, static_cast<double>(k % 3)),
                            Eigen::VectorXd::Constant(2, static_cast<double>(k % 3))});
        }
        lstm_hyperparams hyper;
        hyper.learning_rate = 0.01;
        hyper.batch_size = 4;
        hyper.epochs = 30;
        hyper.seed = 5;
        lstm_train(m, data, hyper);
        return m.forward(constant_series(4, 2, 1.0));
    };
    Eigen::VectorXd a = train_once();
    Eigen::VectorXd b = train_once();
    CHECK(a == b);
}

TEST_CASE("empty dataset is rejected") {
    lstm_model m(1, 2);
    CHECK_THROWS_AS(lstm_train(m, {}, {}), dimension_mismatch);
}

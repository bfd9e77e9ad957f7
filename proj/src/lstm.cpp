#include "icps/lstm.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace icps {

namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& z) {
    return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

struct step_cache {
    Eigen::VectorXd x, i, f, o, g, c, tanh_c, h_prev, c_prev;
};

}  // namespace

lstm_model::lstm_model(int input_dim, int hidden)
    : input_dim_(input_dim), hidden_(hidden) {
    if (input_dim <= 0 || hidden <= 0)
        throw dimension_mismatch("lstm dims must be positive");
    w_i = Eigen::MatrixXd::Zero(hidden, input_dim);
    w_f = w_i; w_o = w_i; w_g = w_i;
    u_i = Eigen::MatrixXd::Zero(hidden, hidden);
    u_f = u_i; u_o = u_i; u_g = u_i;
    b_i = Eigen::VectorXd::Zero(hidden);
    b_f = b_i; b_o = b_i; b_g = b_i;
    w_y = Eigen::MatrixXd::Zero(input_dim, hidden);
    b_y = Eigen::VectorXd::Zero(input_dim);
}

lstm_model lstm_model::random_init(int input_dim, int hidden, std::uint64_t seed) {
    lstm_model m(input_dim, hidden);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 0.1);
    auto fill = [&](Eigen::MatrixXd& mat) {
        for (Eigen::Index r = 0; r < mat.rows(); ++r)
            for (Eigen::Index c = 0; c < mat.cols(); ++c) mat(r, c) = dist(rng);
    };
    auto fillv = [&](Eigen::VectorXd& v) {
        for (Eigen::Index r = 0; r < v.size(); ++r) v(r) = dist(rng);
    };
    fill(m.w_i); fill(m.w_f); fill(m.w_o); fill(m.w_g);
    fill(m.u_i); fill(m.u_f); fill(m.u_o); fill(m.u_g);
    fillv(m.b_i); fillv(m.b_f); fillv(m.b_o); fillv(m.b_g);
    fill(m.w_y); fillv(m.b_y);
    // forget bias starts at 1 so early training does not wipe cell state
    m.b_f.array() += 1.0;
    return m;
}

void lstm_model::check_series(const lstm_series& series) const {
    if (series.empty()) throw dimension_mismatch("series must be non-empty");
    for (const auto& x : series) {
        if (x.size() != input_dim_)
            throw dimension_mismatch("series vector dim " + std::to_string(x.size()) +
                                     " != input dim " + std::to_string(input_dim_));
    }
}

Eigen::VectorXd lstm_model::forward(const lstm_series& series) const {
    check_series(series);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(hidden_);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(hidden_);
    for (const auto& x : series) {
        Eigen::VectorXd i = sigmoid(w_i * x + u_i * h + b_i);
        Eigen::VectorXd f = sigmoid(w_f * x + u_f * h + b_f);
        Eigen::VectorXd o = sigmoid(w_o * x + u_o * h + b_o);
        Eigen::VectorXd g = (w_g * x + u_g * h + b_g).array().tanh();
        c = f.cwiseProduct(c) + i.cwiseProduct(g);
        h = o.cwiseProduct(c.array().tanh().matrix());
    }
    return w_y * h + b_y;
}

void lstm_model::gradients::setZero(int input_dim, int hidden) {
    w_i = Eigen::MatrixXd::Zero(hidden, input_dim);
    w_f = w_i; w_o = w_i; w_g = w_i;
    u_i = Eigen::MatrixXd::Zero(hidden, hidden);
    u_f = u_i; u_o = u_i; u_g = u_i;
    b_i = Eigen::VectorXd::Zero(hidden);
    b_f = b_i; b_o = b_i; b_g = b_i;
    w_y = Eigen::MatrixXd::Zero(input_dim, hidden);
    b_y = Eigen::VectorXd::Zero(input_dim);
}

void lstm_model::gradients::accumulate(const gradients& other, double scale) {
    w_i += scale * other.w_i; w_f += scale * other.w_f;
    w_o += scale * other.w_o; w_g += scale * other.w_g;
    u_i += scale * other.u_i; u_f += scale * other.u_f;
    u_o += scale * other.u_o; u_g += scale * other.u_g;
    b_i += scale * other.b_i; b_f += scale * other.b_f;
    b_o += scale * other.b_o; b_g += scale * other.b_g;
    w_y += scale * other.w_y; b_y += scale * other.b_y;
}

double lstm_model::loss_and_gradients(const lstm_series& series,
                                      const Eigen::VectorXd& target,
                                      gradients& grads) const {
    check_series(series);
    if (target.size() != input_dim_)
        throw dimension_mismatch("target dim mismatch");

    const int steps = static_cast<int>(series.size());
    std::vector<step_cache> cache(steps);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(hidden_);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(hidden_);
    for (int t = 0; t < steps; ++t) {
        auto& s = cache[t];
        s.x = series[t];
        s.h_prev = h;
        s.c_prev = c;
        s.i = sigmoid(w_i * s.x + u_i * h + b_i);
        s.f = sigmoid(w_f * s.x + u_f * h + b_f);
        s.o = sigmoid(w_o * s.x + u_o * h + b_o);
        s.g = (w_g * s.x + u_g * h + b_g).array().tanh();
        c = s.f.cwiseProduct(c) + s.i.cwiseProduct(s.g);
        s.c = c;
        s.tanh_c = c.array().tanh();
        h = s.o.cwiseProduct(s.tanh_c);
    }
    Eigen::VectorXd y = w_y * h + b_y;
    Eigen::VectorXd err = y - target;
    double loss = err.squaredNorm() / static_cast<double>(input_dim_);

    grads.setZero(input_dim_, hidden_);
    Eigen::VectorXd dy = 2.0 * err / static_cast<double>(input_dim_);
    grads.w_y = dy * h.transpose();
    grads.b_y = dy;

    Eigen::VectorXd dh = w_y.transpose() * dy;
    Eigen::VectorXd dc = Eigen::VectorXd::Zero(hidden_);
    for (int t = steps - 1; t >= 0; --t) {
        const auto& s = cache[t];
        Eigen::VectorXd d_o = dh.cwiseProduct(s.tanh_c);
        dc += dh.cwiseProduct(s.o).cwiseProduct(
            (1.0 - s.tanh_c.array().square()).matrix());
        Eigen::VectorXd d_i = dc.cwiseProduct(s.g);
        Eigen::VectorXd d_g = dc.cwiseProduct(s.i);
        Eigen::VectorXd d_f = dc.cwiseProduct(s.c_prev);

        Eigen::VectorXd dz_i = d_i.cwiseProduct(s.i).cwiseProduct((1.0 - s.i.array()).matrix());
        Eigen::VectorXd dz_f = d_f.cwiseProduct(s.f).cwiseProduct((1.0 - s.f.array()).matrix());
        Eigen::VectorXd dz_o = d_o.cwiseProduct(s.o).cwiseProduct((1.0 - s.o.array()).matrix());
        Eigen::VectorXd dz_g = d_g.cwiseProduct((1.0 - s.g.array().square()).matrix());

        grads.w_i += dz_i * s.x.transpose();
        grads.w_f += dz_f * s.x.transpose();
        grads.w_o += dz_o * s.x.transpose();
        grads.w_g += dz_g * s.x.transpose();
        grads.u_i += dz_i * s.h_prev.transpose();
        grads.u_f += dz_f * s.h_prev.transpose();
        grads.u_o += dz_o * s.h_prev.transpose();
        grads.u_g += dz_g * s.h_prev.transpose();
        grads.b_i += dz_i;
        grads.b_f += dz_f;
        grads.b_o += dz_o;
        grads.b_g += dz_g;

        dh = u_i.transpose() * dz_i + u_f.transpose() * dz_f +
             u_o.transpose() * dz_o + u_g.transpose() * dz_g;
        dc = dc.cwiseProduct(s.f);
    }
    return loss;
}

std::vector<double*> lstm_model::parameter_refs() {
    std::vector<double*> refs;
    auto add_mat = [&](Eigen::MatrixXd& m) {
        for (Eigen::Index k = 0; k < m.size(); ++k) refs.push_back(m.data() + k);
    };
    auto add_vec = [&](Eigen::VectorXd& v) {
        for (Eigen::Index k = 0; k < v.size(); ++k) refs.push_back(v.data() + k);
    };
    add_mat(w_i); add_mat(w_f); add_mat(w_o); add_mat(w_g);
    add_mat(u_i); add_mat(u_f); add_mat(u_o); add_mat(u_g);
    add_vec(b_i); add_vec(b_f); add_vec(b_o); add_vec(b_g);
    add_mat(w_y); add_vec(b_y);
    return refs;
}

std::vector<double> lstm_model::flatten_gradients(const gradients& g) const {
    std::vector<double> out;
    auto add_mat = [&](const Eigen::MatrixXd& m) {
        for (Eigen::Index k = 0; k < m.size(); ++k) out.push_back(*(m.data() + k));
    };
    auto add_vec = [&](const Eigen::VectorXd& v) {
        for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(*(v.data() + k));
    };
    add_mat(g.w_i); add_mat(g.w_f); add_mat(g.w_o); add_mat(g.w_g);
    add_mat(g.u_i); add_mat(g.u_f); add_mat(g.u_o); add_mat(g.u_g);
    add_vec(g.b_i); add_vec(g.b_f); add_vec(g.b_o); add_vec(g.b_g);
    add_mat(g.w_y); add_vec(g.b_y);
    return out;
}

namespace {

struct adam_state {
    std::vector<double> m, v;
    long step = 0;
};

void adam_update(std::vector<double*>& params, const std::vector<double>& grad,
                 adam_state& state, double lr) {
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    if (state.m.empty()) {
        state.m.assign(params.size(), 0.0);
        state.v.assign(params.size(), 0.0);
    }
    ++state.step;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
    for (size_t k = 0; k < params.size(); ++k) {
        state.m[k] = beta1 * state.m[k] + (1.0 - beta1) * grad[k];
        state.v[k] = beta2 * state.v[k] + (1.0 - beta2) * grad[k] * grad[k];
        const double mhat = state.m[k] / bc1;
        const double vhat = state.v[k] / bc2;
        *params[k] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

}  // namespace

std::vector<double> lstm_train(lstm_model& model,
                               const std::vector<lstm_sample>& dataset,
                               const lstm_hyperparams& hyper) {
    if (dataset.empty()) throw dimension_mismatch("empty training dataset");
    std::mt19937_64 rng(hyper.seed);
    std::vector<size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<double*> params = model.parameter_refs();
    adam_state adam;
    std::vector<double> history;
    history.reserve(hyper.epochs);

    const int batch = std::max(1, hyper.batch_size);
    lstm_model::gradients sample_grads, batch_grads;
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        size_t pos = 0;
        while (pos < order.size()) {
            const size_t end = std::min(order.size(), pos + static_cast<size_t>(batch));
            batch_grads.setZero(model.input_dim(), model.hidden());
            const double inv = 1.0 / static_cast<double>(end - pos);
            for (size_t k = pos; k < end; ++k) {
                const auto& [series, target] = dataset[order[k]];
                epoch_loss += model.loss_and_gradients(series, target, sample_grads);
                batch_grads.accumulate(sample_grads, inv);
            }
            std::vector<double> flat = model.flatten_gradients(batch_grads);
            if (hyper.learning_rate != 0.0)
                adam_update(params, flat, adam, hyper.learning_rate);
            pos = end;
        }
        epoch_loss /= static_cast<double>(dataset.size());
        if (!std::isfinite(epoch_loss)) throw non_finite_loss();
        history.push_back(epoch_loss);
    }
    return history;
}

}  // namespace icps

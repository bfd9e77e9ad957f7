#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "icps/workflow.hpp"

namespace icps {

class dimension_mismatch : public std::runtime_error {
  public:
    explicit dimension_mismatch(const std::string& what) : std::runtime_error(what) {}
};

class non_finite_loss : public std::runtime_error {
  public:
    non_finite_loss() : std::runtime_error("training diverged: loss not finite") {}
};

struct lstm_hyperparams {
    double learning_rate = 1e-3;
    int batch_size = 32;
    int epochs = 1000;
    std::uint64_t seed = 1;
};

// One training sample: an input series (each element a per-type concurrency
// vector) and the next-interval target vector.
using lstm_series = std::vector<Eigen::VectorXd>;
using lstm_sample = std::pair<lstm_series, Eigen::VectorXd>;

// Single-hidden-layer LSTM with a linear readout of the final hidden state.
// Gate weights are public so tests can pin cells by hand.
class lstm_model {
  public:
    lstm_model() = default;
    lstm_model(int input_dim, int hidden);

    static lstm_model random_init(int input_dim, int hidden, std::uint64_t seed);

    int input_dim() const { return input_dim_; }
    int hidden() const { return hidden_; }

    // Runs the recurrence over the series and projects the final hidden
    // state. Output is raw (unclamped).
    Eigen::VectorXd forward(const lstm_series& series) const;

    struct gradients {
        Eigen::MatrixXd w_i, w_f, w_o, w_g;   // input weights, hidden x input
        Eigen::MatrixXd u_i, u_f, u_o, u_g;   // recurrent weights, hidden x hidden
        Eigen::VectorXd b_i, b_f, b_o, b_g;   // gate biases
        Eigen::MatrixXd w_y;                  // readout, input x hidden
        Eigen::VectorXd b_y;

        void setZero(int input_dim, int hidden);
        void accumulate(const gradients& other, double scale);
    };

    // MSE loss (mean over output dims) and its gradient w.r.t. all weights,
    // by backpropagation through time.
    double loss_and_gradients(const lstm_series& series, const Eigen::VectorXd& target,
                              gradients& grads) const;

    // Flattened parameter access for finite-difference checks.
    std::vector<double*> parameter_refs();
    std::vector<double> flatten_gradients(const gradients& g) const;

    Eigen::MatrixXd w_i, w_f, w_o, w_g;
    Eigen::MatrixXd u_i, u_f, u_o, u_g;
    Eigen::VectorXd b_i, b_f, b_o, b_g;
    Eigen::MatrixXd w_y;
    Eigen::VectorXd b_y;

  private:
    void check_series(const lstm_series& series) const;

    int input_dim_ = 0;
    int hidden_ = 0;
};

// Adam on the MSE loss. Sample order is shuffled per epoch with the seeded
// generator; the run is deterministic for a fixed seed. Returns the loss
// history (one mean-loss entry per epoch).
std::vector<double> lstm_train(lstm_model& model,
                               const std::vector<lstm_sample>& dataset,
                               const lstm_hyperparams& hyper);

}  // namespace icps

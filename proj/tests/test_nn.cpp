#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "hecad/nn/dense.hpp"
#include "hecad/nn/grad_check.hpp"
#include "hecad/nn/lstm.hpp"
#include "hecad/nn/mlp.hpp"
#include "hecad/nn/optimizer.hpp"
#include "hecad/nn/rng.hpp"

using namespace hecad;
using nn::Vec;

namespace {

nn::DenseLayer layer_from(nn::Tensor2 w, Vec b, nn::Activation act) {
    nn::DenseLayer l;
    l.weights = std::move(w);
    l.biases = std::move(b);
    l.activation = act;
    return l;
}

nn::Tensor2 identity3() {
    nn::Tensor2 w(3, 3);
    for (int i = 0; i < 3; ++i) w.at(i, i) = 1.0;
    return w;
}

double rel_error(const Vec& a, const Vec& b) {
    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        da += a[i] * a[i];
        db += b[i] * b[i];
    }
    return std::sqrt(num) / std::max(1e-300, std::max(std::sqrt(da), std::sqrt(db)));
}

}  // namespace

TEST(DenseForward, IdentityLinear) {
    auto l = layer_from(identity3(), Vec(3, 0.0), nn::Activation::kLinear);
    const Vec out = nn::dense_forward(l, {1.0, 2.0, 3.0});
    EXPECT_EQ(out, (Vec{1.0, 2.0, 3.0}));
}

TEST(DenseForward, ZeroWeightsTanh) {
    auto l = layer_from(nn::Tensor2(3, 3), Vec(3, 0.0), nn::Activation::kTanh);
    const Vec out = nn::dense_forward(l, {5.0, -2.0, 0.1});
    for (double v : out) EXPECT_EQ(v, 0.0);
}

TEST(DenseForward, SoftmaxSymmetry) {
    nn::Tensor2 w(2, 2);
    w.at(0, 0) = 1.0;
    w.at(1, 1) = 1.0;
    auto l = layer_from(std::move(w), Vec(2, 0.0), nn::Activation::kSoftmax);
    const Vec out = nn::dense_forward(l, {0.0, 0.0});
    EXPECT_DOUBLE_EQ(out[0], 0.5);
    EXPECT_DOUBLE_EQ(out[1], 0.5);
}

TEST(DenseForward, DimensionMismatchNamesSizes) {
    auto l = layer_from(nn::Tensor2(2, 3), Vec(2, 0.0), nn::Activation::kLinear);
    try {
        nn::dense_forward(l, {1.0, 2.0});
        FAIL() << "expected throw";
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("3"), std::string::npos);
        EXPECT_NE(msg.find("2"), std::string::npos);
    }
}

TEST(Softmax, SumsToOneAndShiftInvariant) {
    auto rng = nn::make_rng({123});
    std::uniform_real_distribution<double> dist(-30.0, 30.0);
    for (int trial = 0; trial < 200; ++trial) {
        Vec logits(5);
        for (double& v : logits) v = dist(rng);
        const Vec s = nn::softmax(logits);
        double sum = 0.0;
        for (double v : s) {
            EXPECT_GT(v, 0.0);
            EXPECT_LT(v, 1.0);
            sum += v;
        }
        EXPECT_NEAR(sum, 1.0, 1e-9);

        Vec shifted = logits;
        for (double& v : shifted) v += 17.25;
        const Vec s2 = nn::softmax(shifted);
        for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i], s2[i], 1e-9);
    }
}

// --- LSTM ----------------------------------------------------------------

TEST(LstmStep, ZeroNetworkGivesZeroState) {
    auto rng = nn::make_rng({1});
    auto cell = nn::make_lstm_cell(3, 4, nn::BiasConvention::kSingle, rng);
    for (double& w : cell.w_input.data) w = 0.0;
    for (double& w : cell.w_recur.data) w = 0.0;
    Vec h, c;
    nn::lstm_step(cell, {1.0, -2.0, 3.0}, Vec(4, 0.0), Vec(4, 0.0), h, c);
    for (double v : h) EXPECT_EQ(v, 0.0);
    for (double v : c) EXPECT_EQ(v, 0.0);
}

// One-unit cell with a saturated forget gate and a shut input gate keeps its
// cell state: c' = sigmoid(big)*c + sigmoid(-big)*g ~= c.
TEST(LstmStep, SaturatedForgetPreservesCellState) {
    auto rng = nn::make_rng({2});
    auto cell = nn::make_lstm_cell(1, 1, nn::BiasConvention::kSingle, rng);
    for (double& w : cell.w_input.data) w = 0.0;
    for (double& w : cell.w_recur.data) w = 0.0;
    cell.bias[0] = -50.0;  // input gate ~ 0
    cell.bias[1] = 50.0;   // forget gate ~ 1
    Vec h, c;
    nn::lstm_step(cell, {0.7}, {0.0}, {0.42}, h, c);
    EXPECT_NEAR(c[0], 0.42, 1e-9);
}

// Hand-evaluated gate equations for a fixed 1-unit cell, independent of the
// implementation.
TEST(LstmStep, MatchesHandEvaluatedGateEquations) {
    auto rng = nn::make_rng({3});
    auto cell = nn::make_lstm_cell(1, 1, nn::BiasConvention::kSingle, rng);
    cell.w_input.data = {0.5, -0.25, 1.0, 0.75};  // i,f,g,o rows
    cell.w_recur.data = {0.1, 0.2, -0.3, 0.4};
    cell.bias = {0.05, -0.1, 0.0, 0.2};
    const double x = 0.8, h0 = -0.5, c0 = 0.3;
    auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    const double gi = sig(0.5 * x + 0.1 * h0 + 0.05);
    const double gf = sig(-0.25 * x + 0.2 * h0 - 0.1);
    const double gg = std::tanh(1.0 * x - 0.3 * h0 + 0.0);
    const double go = sig(0.75 * x + 0.4 * h0 + 0.2);
    const double c1 = gf * c0 + gi * gg;
    const double h1 = go * std::tanh(c1);

    Vec h, c;
    nn::lstm_step(cell, {x}, {h0}, {c0}, h, c);
    EXPECT_NEAR(c[0], c1, 1e-12);
    EXPECT_NEAR(h[0], h1, 1e-12);
}

TEST(LstmStep, DoubleBiasWithZeroExtraMatchesSingle) {
    auto rng = nn::make_rng({4});
    auto single = nn::make_lstm_cell(2, 3, nn::BiasConvention::kSingle, rng);
    auto dbl = single;
    dbl.bias_convention = nn::BiasConvention::kDouble;
    dbl.bias_recur.assign(12, 0.0);

    Vec x{0.3, -0.7}, h0(3, 0.1), c0(3, -0.2);
    Vec h1, c1, h2, c2;
    nn::lstm_step(single, x, h0, c0, h1, c1);
    nn::lstm_step(dbl, x, h0, c0, h2, c2);
    EXPECT_EQ(h1, h2);
    EXPECT_EQ(c1, c2);
}

TEST(LstmParams, ClosedFormMatchesStoredValues) {
    auto rng = nn::make_rng({5});
    for (std::size_t input_dim : {1u, 3u, 18u}) {
        for (std::size_t units : {1u, 2u, 50u}) {
            for (auto conv : {nn::BiasConvention::kSingle, nn::BiasConvention::kDouble}) {
                auto cell = nn::make_lstm_cell(input_dim, units, conv, rng);
                const std::size_t stored = cell.w_input.data.size() + cell.w_recur.data.size() +
                                           cell.bias.size() + cell.bias_recur.size();
                EXPECT_EQ(nn::count_parameters_lstm(cell), stored);
            }
        }
    }
}

TEST(LstmParams, KnownCounts) {
    auto rng = nn::make_rng({6});
    auto iot = nn::make_lstm_cell(18, 50, nn::BiasConvention::kSingle, rng);
    EXPECT_EQ(nn::count_parameters_lstm(iot), 13800u);
    auto edge = nn::make_lstm_cell(18, 100, nn::BiasConvention::kDouble, rng);
    EXPECT_EQ(nn::count_parameters_lstm(edge), 48000u);
    EXPECT_THROW(nn::make_lstm_cell(0, 5, nn::BiasConvention::kSingle, rng), std::invalid_argument);
}

// --- train_step ------------------------------------------------------------

TEST(TrainStep, ZeroLearningRateLeavesParameters) {
    auto rng = nn::make_rng({7});
    nn::Mlp net;
    net.layers.push_back(nn::make_dense_layer(3, 2, nn::Activation::kTanh, rng));
    net.layers.push_back(nn::make_dense_layer(2, 3, nn::Activation::kLinear, rng));
    const Vec before = nn::flatten_params(net);

    nn::Tensor2 batch(2, 3);
    batch.data = {1, 2, 3, -1, 0, 1};
    nn::OptimizerConfig cfg;
    cfg.learning_rate = 0.0;
    nn::Optimizer opt(cfg);
    auto rng2 = nn::make_rng({8});
    const double loss = nn::train_step(net, batch, batch, nn::Loss::kMse, opt, 0.0, rng2);
    EXPECT_TRUE(std::isfinite(loss));
    EXPECT_EQ(nn::flatten_params(net), before);
}

// Single linear layer, one sample: the MSE gradient is 2 (y_hat - y) x^T.
TEST(TrainStep, LinearMseGradientAnalytic) {
    nn::Mlp net;
    nn::Tensor2 w(1, 2);
    w.data = {0.5, -0.3};
    net.layers.push_back(layer_from(std::move(w), Vec(1, 0.1), nn::Activation::kLinear));

    const Vec x{2.0, -1.0};
    const double y = 1.5;
    const double y_hat = 0.5 * 2.0 + (-0.3) * (-1.0) + 0.1;  // 1.4

    nn::Tensor2 batch(1, 2), target(1, 1);
    batch.data = x;
    target.data = {y};
    nn::OptimizerConfig cfg;
    cfg.learning_rate = 0.1;
    nn::Optimizer opt(cfg);
    auto rng = nn::make_rng({9});
    nn::train_step(net, batch, target, nn::Loss::kMse, opt, 0.0, rng);

    const double g = 2.0 * (y_hat - y);
    EXPECT_NEAR(net.layers[0].weights.at(0, 0), 0.5 - 0.1 * g * x[0], 1e-12);
    EXPECT_NEAR(net.layers[0].weights.at(0, 1), -0.3 - 0.1 * g * x[1], 1e-12);
    EXPECT_NEAR(net.layers[0].biases[0], 0.1 - 0.1 * g, 1e-12);
}

// Perfect fit + l2: the only update is the weight-decay step lr*gamma*w.
TEST(TrainStep, PureWeightDecayShrinksWeights) {
    nn::Mlp net;
    nn::Tensor2 w(1, 1);
    w.data = {2.0};
    net.layers.push_back(layer_from(std::move(w), Vec(1, 0.0), nn::Activation::kLinear));

    nn::Tensor2 batch(1, 1), target(1, 1);
    batch.data = {3.0};
    target.data = {6.0};  // exact output of w=2, b=0

    nn::OptimizerConfig cfg;
    cfg.learning_rate = 0.5;
    cfg.l2_gamma = 0.01;
    nn::Optimizer opt(cfg);
    auto rng = nn::make_rng({10});
    nn::train_step(net, batch, target, nn::Loss::kMse, opt, 0.0, rng);
    EXPECT_NEAR(net.layers[0].weights.at(0, 0), 2.0 - 0.5 * 0.01 * 2.0, 1e-12);
    EXPECT_DOUBLE_EQ(net.layers[0].biases[0], 0.0);  // biases are not decayed
}

TEST(TrainStep, NonFiniteLossAborts) {
    nn::Mlp net;
    nn::Tensor2 w(1, 1);
    w.data = {1e308};
    net.layers.push_back(layer_from(std::move(w), Vec(1, 0.0), nn::Activation::kLinear));
    nn::Tensor2 batch(1, 1), target(1, 1);
    batch.data = {1e10};
    target.data = {0.0};
    nn::OptimizerConfig cfg;
    nn::Optimizer opt(cfg);
    auto rng = nn::make_rng({11});
    EXPECT_THROW(nn::train_step(net, batch, target, nn::Loss::kMse, opt, 0.0, rng),
                 std::runtime_error);
}

// Backprop vs the central-difference oracle on a random network. The SGD
// update with lr=1 and no l2 recovers the raw batch gradient.
TEST(TrainStep, BackpropMatchesFiniteDifferences) {
    auto rng = nn::make_rng({12});
    nn::Mlp net;
    net.layers.push_back(nn::make_dense_layer(6, 10, nn::Activation::kTanh, rng));
    net.layers.push_back(nn::make_dense_layer(10, 8, nn::Activation::kTanh, rng));
    net.layers.push_back(nn::make_dense_layer(8, 6, nn::Activation::kLinear, rng));
    ASSERT_LE(net.parameter_count(), 1000u);

    nn::Tensor2 batch(4, 6), target(4, 6);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& v : batch.data) v = dist(rng);
    for (double& v : target.data) v = dist(rng);

    const Vec theta0 = nn::flatten_params(net);
    auto loss_at = [&](const Vec& theta) {
        nn::Mlp copy = net;
        nn::load_params(copy, theta);
        double total = 0.0;
        for (std::size_t i = 0; i < batch.rows; ++i) {
            const Vec out = nn::mlp_forward(copy, Vec(batch.row(i), batch.row(i) + batch.cols));
            for (std::size_t d = 0; d < out.size(); ++d) {
                const double diff = out[d] - target.at(i, d);
                total += diff * diff;
            }
        }
        return total / static_cast<double>(batch.rows);
    };
    const Vec fd = nn::finite_diff_gradient(loss_at, theta0, 1e-6);

    nn::Mlp trained = net;
    nn::OptimizerConfig cfg;
    cfg.learning_rate = 1.0;
    nn::Optimizer opt(cfg);
    auto rng2 = nn::make_rng({13});
    nn::train_step(trained, batch, target, nn::Loss::kMse, opt, 0.0, rng2);
    const Vec theta1 = nn::flatten_params(trained);
    Vec bp(theta0.size());
    for (std::size_t i = 0; i < bp.size(); ++i) bp[i] = theta0[i] - theta1[i];

    EXPECT_LT(rel_error(bp, fd), 1e-4);
}

TEST(TrainStep, ReinforceLossGradientMatchesFiniteDifferences) {
    auto rng = nn::make_rng({14});
    nn::Mlp net;
    net.layers.push_back(nn::make_dense_layer(4, 6, nn::Activation::kTanh, rng));
    net.layers.push_back(nn::make_dense_layer(6, 3, nn::Activation::kSoftmax, rng));

    nn::Tensor2 batch(3, 4), coeffs(3, 3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& v : batch.data) v = dist(rng);
    // advantage-weighted one-hot coefficient rows
    coeffs.data = {0.7, 0, 0, 0, -0.4, 0, 0, 0, 1.2};

    const Vec theta0 = nn::flatten_params(net);
    auto loss_at = [&](const Vec& theta) {
        nn::Mlp copy = net;
        nn::load_params(copy, theta);
        double total = 0.0;
        for (std::size_t i = 0; i < batch.rows; ++i) {
            const Vec s = nn::mlp_forward(copy, Vec(batch.row(i), batch.row(i) + batch.cols));
            for (std::size_t k = 0; k < 3; ++k)
                total += -coeffs.at(i, k) * std::log(std::max(s[k], 1e-12));
        }
        return total / static_cast<double>(batch.rows);
    };
    const Vec fd = nn::finite_diff_gradient(loss_at, theta0, 1e-6);

    nn::Mlp trained = net;
    nn::OptimizerConfig cfg;
    cfg.learning_rate = 1.0;
    nn::Optimizer opt(cfg);
    auto rng2 = nn::make_rng({15});
    nn::train_step(trained, batch, coeffs, nn::Loss::kReinforce, opt, 0.0, rng2);
    const Vec theta1 = nn::flatten_params(trained);
    Vec bp(theta0.size());
    for (std::size_t i = 0; i < bp.size(); ++i) bp[i] = theta0[i] - theta1[i];

    EXPECT_LT(rel_error(bp, fd), 1e-4);
}

TEST(TrainStep, DeterministicUnderSeed) {
    auto build = [] {
        auto rng = nn::make_rng({21});
        nn::Mlp net;
        net.layers.push_back(nn::make_dense_layer(5, 7, nn::Activation::kTanh, rng));
        net.layers.push_back(nn::make_dense_layer(7, 5, nn::Activation::kLinear, rng));
        return net;
    };
    auto run = [&] {
        nn::Mlp net = build();
        nn::Tensor2 batch(3, 5);
        auto drng = nn::make_rng({22});
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (double& v : batch.data) v = dist(drng);
        nn::OptimizerConfig cfg;
        cfg.kind = nn::OptimizerKind::kRmsProp;
        cfg.learning_rate = 0.01;
        nn::Optimizer opt(cfg);
        auto rng = nn::make_rng({23});
        for (int e = 0; e < 25; ++e)
            nn::train_step(net, batch, batch, nn::Loss::kMae, opt, 0.3, rng);
        return nn::flatten_params(net);
    };
    EXPECT_EQ(run(), run());  // bit-identical
}

// Inverted dropout: E[mask * a] = a, Monte-Carlo over 1e5 masks.
TEST(Dropout, InvertedMaskIsUnbiased) {
    auto rng = nn::make_rng({24});
    nn::Mlp net;
    net.layers.push_back(nn::make_dense_layer(3, 8, nn::Activation::kTanh, rng));
    net.layers.push_back(nn::make_dense_layer(8, 8, nn::Activation::kLinear, rng));
    for (auto& b : net.layers[1].biases) b = 0.0;
    // make the second layer the identity so its input (the masked hidden
    // activations) is observable at the output
    for (double& w : net.layers[1].weights.data) w = 0.0;
    for (int i = 0; i < 8; ++i) net.layers[1].weights.at(i, i) = 1.0;

    const Vec x{0.4, -1.2, 0.9};
    const Vec clean = nn::mlp_forward(net, x);

    Vec mean(8, 0.0);
    auto mask_rng = nn::make_rng({25});
    nn::MlpForwardCache cache;
    const int kTrials = 100000;
    for (int t = 0; t < kTrials; ++t) {
        const Vec out = nn::mlp_forward_cached(net, x, cache, 0.3, &mask_rng);
        for (int i = 0; i < 8; ++i) mean[i] += out[i];
    }
    for (int i = 0; i < 8; ++i) {
        mean[i] /= kTrials;
        EXPECT_NEAR(mean[i], clean[i], std::abs(clean[i]) * 0.01 + 1e-3);
    }
}

// --- finite_diff_gradient ---------------------------------------------------

TEST(FiniteDiff, QuadraticConstantAndSum) {
    auto sq = [](const Vec& p) { return p[0] * p[0]; };
    EXPECT_NEAR(nn::finite_diff_gradient(sq, {3.0}, 1e-5)[0], 6.0, 1e-6);

    auto constant = [](const Vec&) { return 4.2; };
    for (double g : nn::finite_diff_gradient(constant, {1.0, 2.0, 3.0}, 1e-5)) EXPECT_EQ(g, 0.0);

    auto total = [](const Vec& p) { return std::accumulate(p.begin(), p.end(), 0.0); };
    for (double g : nn::finite_diff_gradient(total, {1.0, -2.0, 0.5}, 1e-5))
        EXPECT_NEAR(g, 1.0, 1e-9);

    EXPECT_THROW(nn::finite_diff_gradient(sq, {1.0}, 0.0), std::invalid_argument);
}

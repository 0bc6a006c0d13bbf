#include "reminisce/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace reminisce {

std::string_view to_string(KernelType kernel) {
    return kernel == KernelType::linear ? "linear" : "rbf";
}

KernelType parse_kernel(std::string_view text) {
    if (text == "linear") return KernelType::linear;
    if (text == "rbf") return KernelType::rbf;
    throw std::invalid_argument("unknown kernel '" + std::string(text) + "'");
}

void SvmConfig::validate() const {
    if (!(C > 0.0)) throw std::invalid_argument("C must be positive");
    if (kernel == KernelType::rbf && !(gamma > 0.0)) throw std::invalid_argument("gamma must be positive for rbf");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (max_passes == 0) throw std::invalid_argument("max_passes must be positive");
}

std::string SvmConfig::describe() const {
    std::ostringstream out;
    out << to_string(kernel) << "(C=" << C;
    if (kernel == KernelType::rbf) out << ", gamma=" << gamma;
    out << ")";
    return out.str();
}

double kernel_value(const SvmConfig& config, std::span<const double> a, std::span<const double> b) {
    if (config.kernel == KernelType::linear) {
        double dot = 0.0;
        for (std::size_t d = 0; d < a.size(); ++d) dot += a[d] * b[d];
        return dot;
    }
    double sq = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        sq += diff * diff;
    }
    return std::exp(-config.gamma * sq);
}

SvmConvergenceError::SvmConvergenceError(std::size_t iterations_, double gap_, double objective_)
    : std::runtime_error("SMO did not converge after " + std::to_string(iterations_) + " iterations (gap " +
                         std::to_string(gap_) + ", dual objective " + std::to_string(objective_) + ")"),
      iterations(iterations_),
      gap(gap_),
      objective(objective_) {}

namespace {

constexpr double kTau = 1e-12;

std::vector<double> gram_matrix(std::span<const std::vector<double>> x, const SvmConfig& config) {
    const std::size_t n = x.size();
    std::vector<double> k(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = kernel_value(config, x[i], x[j]);
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    return k;
}

}  // namespace

double dual_objective(std::span<const std::vector<double>> x, std::span<const int> y, std::span<const double> alpha,
                      const SvmConfig& config) {
    const std::size_t n = x.size();
    double linear = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        linear += alpha[i];
        if (alpha[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (alpha[j] == 0.0) continue;
            quad += alpha[i] * alpha[j] * y[i] * y[j] * kernel_value(config, x[i], x[j]);
        }
    }
    return linear - 0.5 * quad;
}

DualSolution solve_svm_dual(std::span<const std::vector<double>> x, std::span<const int> y, const SvmConfig& config) {
    config.validate();
    const std::size_t n = x.size();
    if (n != y.size()) throw std::invalid_argument("x and y sizes differ");
    if (n < 2) throw std::invalid_argument("need at least two training points");
    for (int label : y) {
        if (label != 1 && label != -1) throw std::invalid_argument("labels must be +1 or -1");
    }

    const double C = config.C;
    const auto K = gram_matrix(x, config);
    auto Q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * K[i * n + j]; };

    DualSolution sol;
    sol.alpha.assign(n, 0.0);
    std::vector<double> G(n, -1.0);  // gradient of 1/2 a'Qa - e'a
    auto& alpha = sol.alpha;
    auto upper = [&](std::size_t t) { return alpha[t] >= C; };
    auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

    const std::size_t max_iter = std::max<std::size_t>(config.max_passes * n, 10000);
    std::size_t iter = 0;
    double gap = std::numeric_limits<double>::infinity();
    for (;; ++iter) {
        // i: maximal violator in I_up.
        double gmax = -std::numeric_limits<double>::infinity();
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (y[t] == 1 ? !upper(t) : !lower(t)) {
                const double v = -y[t] * G[t];
                if (v >= gmax) {
                    gmax = v;
                    i = t;
                }
            }
        }
        // j: second-order choice in I_low.
        double gmax2 = -std::numeric_limits<double>::infinity();
        double best_obj = std::numeric_limits<double>::infinity();
        std::size_t j = n;
        for (std::size_t t = 0; t < n && i < n; ++t) {
            if (y[t] == 1 ? lower(t) : upper(t)) continue;
            const double yg = y[t] * G[t];
            gmax2 = std::max(gmax2, yg);
            const double b = gmax + yg;
            if (b > 0.0) {
                double a = K[i * n + i] + K[t * n + t] - 2.0 * K[i * n + t];
                if (a <= 0.0) a = kTau;
                const double obj = -(b * b) / a;
                if (obj <= best_obj) {
                    best_obj = obj;
                    j = t;
                }
            }
        }
        gap = gmax + gmax2;
        if (i == n || j == n || gap < config.tolerance) break;
        if (iter >= max_iter) {
            double obj = 0.0;
            for (std::size_t t = 0; t < n; ++t) obj -= 0.5 * alpha[t] * (G[t] - 1.0);
            throw SvmConvergenceError(iter, gap, obj);
        }

        const double old_i = alpha[i];
        const double old_j = alpha[j];
        if (y[i] != y[j]) {
            double quad = K[i * n + i] + K[j * n + j] + 2.0 * Q(i, j);
            if (quad <= 0.0) quad = kTau;
            const double delta = (-G[i] - G[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = C - diff;
                }
            } else if (alpha[j] > C) {
                alpha[j] = C;
                alpha[i] = C + diff;
            }
        } else {
            double quad = K[i * n + i] + K[j * n + j] - 2.0 * Q(i, j);
            if (quad <= 0.0) quad = kTau;
            const double delta = (G[i] - G[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = sum - C;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > C) {
                if (alpha[j] > C) {
                    alpha[j] = C;
                    alpha[i] = sum - C;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        const double d_i = alpha[i] - old_i;
        const double d_j = alpha[j] - old_j;
        for (std::size_t t = 0; t < n; ++t) G[t] += Q(t, i) * d_i + Q(t, j) * d_j;
    }

    // Threshold from free vectors, else the midpoint of the feasible interval.
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * G[t];
        if (upper(t)) {
            if (y[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else if (lower(t)) {
            if (y[t] == 1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
    sol.bias = -rho;
    sol.gap = gap;
    sol.iterations = iter;
    double obj = 0.0;
    for (std::size_t t = 0; t < n; ++t) obj -= 0.5 * alpha[t] * (G[t] - 1.0);
    sol.objective = obj;
    return sol;
}

double SvmModel::decision(std::span<const double> x) const {
    if (!support_vectors.empty() && x.size() != support_vectors.front().size()) {
        throw std::invalid_argument("dimension mismatch: model expects " + std::to_string(support_vectors.front().size()) +
                                    " features, got " + std::to_string(x.size()));
    }
    double f = bias;
    for (std::size_t i = 0; i < support_vectors.size(); ++i) f += dual_coefficients[i] * kernel_value(config, support_vectors[i], x);
    return f;
}

const std::string& SvmModel::predict(std::span<const double> x) const {
    return decision(x) >= 0.0 ? class_pair.first : class_pair.second;
}

SvmModel train_svm(const Dataset& data, const SvmConfig& config) {
    const auto counts = data.label_counts();
    std::vector<std::size_t> present;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] > 0) present.push_back(c);
    }
    if (present.size() != 2) {
        throw std::invalid_argument("binary SVM needs exactly 2 labels present, found " + std::to_string(present.size()));
    }
    const auto& positive = data.label_set[present[0]];
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    x.reserve(data.size());
    y.reserve(data.size());
    for (const auto& v : data.vectors) {
        x.push_back(v.values);
        y.push_back(v.label == positive ? 1 : -1);
    }
    const auto sol = solve_svm_dual(x, y, config);

    SvmModel model;
    model.config = config;
    model.bias = sol.bias;
    model.class_pair = {positive, data.label_set[present[1]]};
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (sol.alpha[i] > 0.0) {
            model.support_vectors.push_back(std::move(x[i]));
            model.dual_coefficients.push_back(sol.alpha[i] * y[i]);
        }
    }
    return model;
}

MulticlassSvm MulticlassSvm::train(const Dataset& data, const SvmConfig& config) {
    MulticlassSvm ens;
    const auto counts = data.label_counts();
    std::vector<std::size_t> present;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] > 0) present.push_back(c);
    }
    if (present.size() < 2) throw std::invalid_argument("classification needs at least 2 labels present");
    for (auto c : present) ens.labels_.push_back(data.label_set[c]);

    for (std::size_t a = 0; a < ens.labels_.size(); ++a) {
        for (std::size_t b = a + 1; b < ens.labels_.size(); ++b) {
            std::vector<std::size_t> rows;
            for (std::size_t i = 0; i < data.size(); ++i) {
                const auto& l = data.vectors[i].label;
                if (l == ens.labels_[a] || l == ens.labels_[b]) rows.push_back(i);
            }
            Dataset pair_data = data.subset(rows);
            pair_data.label_set = {ens.labels_[a], ens.labels_[b]};
            ens.pairs_.emplace_back(a, b);
            ens.models_.push_back(train_svm(pair_data, config));
        }
    }
    return ens;
}

const std::string& MulticlassSvm::predict(std::span<const double> x) const {
    std::vector<int> votes(labels_.size(), 0);
    std::vector<double> margin(labels_.size(), 0.0);
    for (std::size_t m = 0; m < models_.size(); ++m) {
        const double f = models_[m].decision(x);
        const auto [a, b] = pairs_[m];
        ++votes[f >= 0.0 ? a : b];
        margin[a] += f;
        margin[b] -= f;
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < labels_.size(); ++c) {
        if (votes[c] > votes[best] || (votes[c] == votes[best] && margin[c] > margin[best])) best = c;
    }
    return labels_[best];
}

}  // namespace reminisce

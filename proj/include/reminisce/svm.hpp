#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "reminisce/dataset.hpp"

namespace reminisce {

enum class KernelType { linear, rbf };

std::string_view to_string(KernelType kernel);
KernelType parse_kernel(std::string_view text);

struct SvmConfig {
    KernelType kernel = KernelType::linear;
    double C = 1.0;
    double gamma = 1.0;  // rbf only
    double tolerance = 1e-3;
    // Iteration budget is max_passes * training-set size pair updates.
    std::size_t max_passes = 1000;

    void validate() const;
    std::string describe() const;
    bool operator==(const SvmConfig&) const = default;
};

double kernel_value(const SvmConfig& config, std::span<const double> a, std::span<const double> b);

class SvmConvergenceError : public std::runtime_error {
public:
    SvmConvergenceError(std::size_t iterations, double gap, double objective);
    std::size_t iterations;
    double gap;
    double objective;
};

// Full solution of the soft-margin dual
//   max sum(a) - 1/2 sum_ij a_i a_j y_i y_j K_ij,  0 <= a_i <= C,  sum a_i y_i = 0.
struct DualSolution {
    std::vector<double> alpha;
    double bias = 0.0;  // f(x) = sum a_i y_i K(x_i, x) + bias
    double objective = 0.0;
    double gap = 0.0;   // final maximal KKT violation
    std::size_t iterations = 0;
};

// SMO with second-order working-set selection. y entries must be +1 or -1.
DualSolution solve_svm_dual(std::span<const std::vector<double>> x, std::span<const int> y, const SvmConfig& config);

double dual_objective(std::span<const std::vector<double>> x, std::span<const int> y, std::span<const double> alpha,
                      const SvmConfig& config);

struct SvmModel {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> dual_coefficients;  // a_i * y_i, within [-C, C], summing to 0
    double bias = 0.0;
    SvmConfig config;
    std::pair<std::string, std::string> class_pair;  // (positive, negative)

    double decision(std::span<const double> x) const;
    // f(x) >= 0 goes to the positive class.
    const std::string& predict(std::span<const double> x) const;
};

// Binary training; the positive class is the first label of data.label_set.
SvmModel train_svm(const Dataset& data, const SvmConfig& config);

// One-vs-one ensemble. Votes decide; ties go to the largest summed margin,
// then to the earlier label.
class MulticlassSvm {
public:
    static MulticlassSvm train(const Dataset& data, const SvmConfig& config);

    const std::string& predict(std::span<const double> x) const;
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<SvmModel>& models() const { return models_; }

private:
    std::vector<std::string> labels_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
    std::vector<SvmModel> models_;
};

}  // namespace reminisce

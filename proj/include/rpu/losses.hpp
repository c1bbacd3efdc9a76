#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rpu {

enum class LossKind {
    Logarithmic,
    Brier,
    Randomized01,
    Hard01,
    MatrixRandomized,
    MatrixHard,
    SkewedLog,
};

const char* loss_kind_name(LossKind kind);
LossKind parse_loss_kind(const std::string& name);  // throws InvalidLoss

// L'(x, Q) = scale * L(x, Q) + offsets[x]
struct AffineTransform {
    double scale = 1.0;
    std::vector<double> offsets;  // empty means all zero
};

struct LossSpec {
    LossKind kind = LossKind::Logarithmic;
    std::vector<std::vector<double>> matrix;  // A[x][x'], matrix kinds only
    std::vector<double> weights;              // c_x, skewed_log only
    std::optional<AffineTransform> affine;

    static LossSpec of(LossKind kind) { return LossSpec{kind, {}, {}, std::nullopt}; }
};

// Throws InvalidLoss / NonPositiveScale when the loss does not fit n outcomes.
void validate_loss(const LossSpec& spec, std::size_t n);

namespace losses {

double loss(const LossSpec& spec, std::size_t x, std::span<const double> q);
double entropy(const LossSpec& spec, std::span<const double> p);
std::vector<double> best_response(const LossSpec& spec, std::span<const double> p);

LossSpec affine_transform(const LossSpec& spec, double scale, std::vector<double> offsets);
bool is_symmetric_between(const LossSpec& spec, std::size_t x1, std::size_t x2);

// inf over Q supported on `support` of sum_x p(x) L(x, Q), found numerically.
double entropy_inner_min(const LossSpec& spec, std::span<const double> p,
                         const std::vector<std::size_t>& support);

// Best response is P itself (log, brier, skewed_log and their affine wrappers).
bool is_proper(const LossSpec& spec);
// Entropy is a minimum of finitely many linear functions.
bool is_piecewise_linear(const LossSpec& spec);
bool is_hard(const LossSpec& spec);

// Hard losses share their entropy with a randomized counterpart; other kinds map to themselves.
LossSpec randomized_counterpart(const LossSpec& spec);

// Matrix A[x][x'] with L(x, Q) = sum_x' Q(x') A[x][x'] for the randomized and hard kinds.
std::vector<std::vector<double>> decision_matrix(const LossSpec& spec, std::size_t n);

double affine_scale(const LossSpec& spec);
double affine_offset(const LossSpec& spec, std::size_t x);

std::string describe(const LossSpec& spec);

}  // namespace losses
}  // namespace rpu

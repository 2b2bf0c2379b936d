#include "tgcn/loss.hpp"

#include <cmath>
#include <cstddef>

#include "tgcn/util.hpp"

namespace tgcn {

namespace {

constexpr double kProbFloor = 1e-12;

void check_inputs(const std::vector<double>& probs, const std::vector<int>& labels, double alpha,
                  double gamma) {
    if (probs.size() != labels.size())
        throw ConfigError("focal loss: probs and labels length mismatch");
    if (!(gamma >= 0.0)) throw ConfigError("focal loss: gamma must be >= 0");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("focal loss: alpha must be in (0,1]");
    for (int y : labels)
        if (y != -1 && y != 0 && y != 1) throw ConfigError("focal loss: labels must be -1, 0 or 1");
}

}  // namespace

double focal_loss(const std::vector<double>& probs, const std::vector<int>& labels, double alpha,
                  double gamma, bool symmetric_alpha) {
    check_inputs(probs, labels, alpha, gamma);
    double sum = 0.0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        int y = labels[i];
        if (y < 0) continue;
        double pt = y == 1 ? probs[i] : 1.0 - probs[i];
        if (pt < kProbFloor) pt = kProbFloor;
        double at = (symmetric_alpha && y == 0) ? 1.0 - alpha : alpha;
        double w = gamma == 0.0 ? 1.0 : std::pow(1.0 - pt, gamma);
        sum += -at * w * std::log(pt);
        ++m;
    }
    if (m == 0) throw ConfigError("focal loss: no labeled rows");
    double loss = sum / static_cast<double>(m);
    if (!std::isfinite(loss)) throw NumericError("focal loss: non-finite value");
    return loss;
}

std::vector<double> focal_grad(const std::vector<double>& probs, const std::vector<int>& labels,
                               double alpha, double gamma, bool symmetric_alpha) {
    check_inputs(probs, labels, alpha, gamma);
    std::size_t m = 0;
    for (int y : labels)
        if (y >= 0) ++m;
    if (m == 0) throw ConfigError("focal loss: no labeled rows");

    std::vector<double> grad(probs.size(), 0.0);
    double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        int y = labels[i];
        if (y < 0) continue;
        double s = y == 1 ? 1.0 : -1.0;  // dp_t/dz = s * p_t(1-p_t)
        double pt = y == 1 ? probs[i] : 1.0 - probs[i];
        if (pt < kProbFloor) pt = kProbFloor;
        double at = (symmetric_alpha && y == 0) ? 1.0 - alpha : alpha;
        double g;
        if (gamma == 0.0) {
            g = s * at * (pt - 1.0);  // cross-entropy case, avoids pow/log at pt=1
        } else {
            double q = 1.0 - pt;
            g = s * at * (gamma * pt * std::pow(q, gamma) * std::log(pt) - std::pow(q, gamma + 1.0));
        }
        grad[i] = g * inv_m;
        if (!std::isfinite(grad[i])) throw NumericError("focal loss: non-finite gradient");
    }
    return grad;
}

}  // namespace tgcn

#pragma once

#include <vector>

namespace tgcn {

// Focal loss over sigmoid probabilities. labels[i] is 0 or 1; -1 marks a
// patient excluded from the loss (e.g. validation/test rows in a transductive
// graph). The mean runs over included rows only.
//
// With symmetric_alpha the class weight is alpha for positives and 1-alpha for
// negatives; turning it off applies alpha to both classes, so alpha=1, gamma=0
// recovers plain binary cross-entropy.
double focal_loss(const std::vector<double>& probs, const std::vector<int>& labels, double alpha,
                  double gamma, bool symmetric_alpha = true);

// d(loss)/d(logit), zero at excluded rows. Includes the 1/M averaging factor,
// so it feeds the backward pass directly.
std::vector<double> focal_grad(const std::vector<double>& probs, const std::vector<int>& labels,
                               double alpha, double gamma, bool symmetric_alpha = true);

}  // namespace tgcn

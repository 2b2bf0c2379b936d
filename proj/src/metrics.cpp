#include "tgcn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tgcn/rng.hpp"
#include "tgcn/util.hpp"

namespace tgcn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_binary_labels(const std::vector<int>& labels, const char* who) {
    for (int y : labels)
        if (y != 0 && y != 1) throw ConfigError(std::string(who) + ": labels must be 0 or 1");
}

}  // namespace

MetricsReport::MetricsReport()
    : auc(kNaN),
      auc_ci_low(kNaN),
      auc_ci_high(kNaN),
      sensitivity(kNaN),
      specificity(kNaN),
      ppv(kNaN),
      npv(kNaN),
      f1(kNaN),
      accuracy(kNaN) {}

SplitResult stratified_split(const std::vector<int>& labels, double test_fraction,
                             std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ConfigError("stratified_split: test_fraction must be in (0,1)");
    check_binary_labels(labels, "stratified_split");
    std::vector<int> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] == 1 ? pos : neg).push_back(static_cast<int>(i));
    if (pos.size() < 2 || neg.size() < 2)
        throw DataError("stratified_split: each class needs at least 2 members");

    SplitResult out;
    std::uint64_t tag = 0;
    for (std::vector<int>* group : {&pos, &neg}) {
        Rng rng(mix_seed(seed, tag++));
        rng.shuffle(*group);
        auto n_test = static_cast<std::size_t>(
            std::llround(static_cast<double>(group->size()) * test_fraction));
        for (std::size_t i = 0; i < group->size(); ++i)
            (i < n_test ? out.test_idx : out.train_idx).push_back((*group)[i]);
    }
    std::sort(out.train_idx.begin(), out.train_idx.end());
    std::sort(out.test_idx.begin(), out.test_idx.end());
    return out;
}

Confusion confusion(const std::vector<double>& scores, const std::vector<int>& labels,
                    double threshold) {
    if (scores.size() != labels.size())
        throw ConfigError("confusion: scores and labels length mismatch");
    check_binary_labels(labels, "confusion");
    Confusion cm;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        bool pred = scores[i] >= threshold;
        if (labels[i] == 1)
            (pred ? cm.tp : cm.fn)++;
        else
            (pred ? cm.fp : cm.tn)++;
    }
    return cm;
}

namespace {

double rate(long long num, long long den) {
    return den == 0 ? kNaN : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricsReport compute_metrics(const Confusion& cm) {
    if (cm.total() == 0) throw ConfigError("compute_metrics: empty confusion matrix");
    MetricsReport r;
    r.counts = cm;
    r.sensitivity = rate(cm.tp, cm.tp + cm.fn);
    r.specificity = rate(cm.tn, cm.tn + cm.fp);
    r.ppv = rate(cm.tp, cm.tp + cm.fp);
    r.npv = rate(cm.tn, cm.tn + cm.fn);
    if (std::isnan(r.ppv) || std::isnan(r.sensitivity) || r.ppv + r.sensitivity == 0.0)
        r.f1 = kNaN;
    else
        r.f1 = 2.0 * r.ppv * r.sensitivity / (r.ppv + r.sensitivity);
    r.accuracy = rate(cm.tp + cm.tn, cm.total());
    return r;
}

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw ConfigError("auc: scores and labels length mismatch");
    check_binary_labels(labels, "auc");
    for (double s : scores)
        if (!std::isfinite(s)) throw NumericError("auc: non-finite score");
    long long n_pos = 0, n_neg = 0;
    for (int y : labels) (y == 1 ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0) throw DataError("auc: both classes required");

    const std::size_t n = scores.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] != scores[b] ? scores[a] < scores[b] : a < b;
    });

    // Rank sum over positives, tied scores sharing their average rank.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[idx[j]] == scores[idx[i]]) ++j;
        double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1 .. j
        for (std::size_t k = i; k < j; ++k)
            if (labels[idx[k]] == 1) rank_sum_pos += avg_rank;
        i = j;
    }
    double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double auc_or_nan(const std::vector<double>& scores, const std::vector<int>& labels) {
    try {
        return auc(scores, labels);
    } catch (const DataError&) {
        return kNaN;
    }
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    double pos = q * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

}  // namespace

AucCi bootstrap_auc_ci(const std::vector<double>& scores, const std::vector<int>& labels,
                       int n_boot, std::uint64_t seed) {
    if (n_boot < 1) throw ConfigError("bootstrap_auc_ci: n_boot must be >= 1");
    auc(scores, labels);  // validates inputs, both classes present

    const std::size_t n = scores.size();
    std::vector<double> reps;
    reps.reserve(static_cast<std::size_t>(n_boot));
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (int r = 0; r < n_boot; ++r) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
        for (int attempt = 0;; ++attempt) {
            if (attempt >= 1000)
                throw NumericError("bootstrap_auc_ci: could not draw a two-class resample");
            int pos = 0;
            for (std::size_t i = 0; i < n; ++i) {
                auto j = static_cast<std::size_t>(rng.below(static_cast<int>(n)));
                s[i] = scores[j];
                y[i] = labels[j];
                pos += y[i];
            }
            if (pos > 0 && pos < static_cast<int>(n)) break;  // single-class: redraw
        }
        reps.push_back(auc(s, y));
    }
    std::sort(reps.begin(), reps.end());
    return {quantile_sorted(reps, 0.025), quantile_sorted(reps, 0.975)};
}

double youden_threshold(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw ConfigError("youden_threshold: scores and labels length mismatch");
    check_binary_labels(labels, "youden_threshold");
    long long n_pos = 0, n_neg = 0;
    for (int yv : labels) (yv == 1 ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0) throw DataError("youden_threshold: both classes required");

    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    // Sweep thresholds downward through the unique scores; with the >= rule,
    // threshold = s classifies everything scoring at least s as positive.
    double best_j = -2.0, best_t = scores[idx[0]];
    long long tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < idx.size()) {
        double t = scores[idx[i]];
        while (i < idx.size() && scores[idx[i]] == t) {
            (labels[idx[i]] == 1 ? tp : fp)++;
            ++i;
        }
        double j = static_cast<double>(tp) / static_cast<double>(n_pos) +
                   static_cast<double>(n_neg - fp) / static_cast<double>(n_neg) - 1.0;
        if (j > best_j || (j == best_j && t < best_t)) {
            best_j = j;
            best_t = t;
        }
    }
    return best_t;
}

MetricsReport evaluate(const std::vector<double>& scores, const std::vector<int>& labels,
                       double threshold, int n_boot, std::uint64_t seed) {
    MetricsReport r = compute_metrics(confusion(scores, labels, threshold));
    r.threshold = threshold;
    r.auc = auc_or_nan(scores, labels);
    if (!std::isnan(r.auc)) {
        AucCi ci = bootstrap_auc_ci(scores, labels, n_boot, seed);
        // Percentile intervals are widened, if needed, to cover the point
        // estimate so the report is always internally consistent.
        r.auc_ci_low = std::min(ci.low, r.auc);
        r.auc_ci_high = std::max(ci.high, r.auc);
    }
    return r;
}

namespace {

std::string json_number(double v) { return std::isnan(v) ? "\"NA\"" : format_shortest(v); }

std::string cell(double v) { return std::isnan(v) ? "NA" : format_fixed(100.0 * v, 2); }

void pad_to(std::string& line, std::size_t width) {
    if (line.size() < width) line.append(width - line.size(), ' ');
}

}  // namespace

std::string metrics_to_json(const MetricsReport& r) {
    std::string out = "{";
    const char* names[] = {"auc", "auc_ci_low", "auc_ci_high", "sensitivity", "specificity",
                           "ppv", "npv",        "f1",          "accuracy",    "threshold"};
    const double vals[] = {r.auc, r.auc_ci_low, r.auc_ci_high, r.sensitivity, r.specificity,
                           r.ppv, r.npv,        r.f1,          r.accuracy,    r.threshold};
    for (int i = 0; i < 10; ++i) {
        if (i) out += ",";
        out += "\"";
        out += names[i];
        out += "\":";
        out += json_number(vals[i]);
    }
    out += "}\n";
    return out;
}

std::string metrics_table(const MetricsReport& r, const std::string& row_label) {
    std::string auc_cell = cell(r.auc);
    if (!std::isnan(r.auc_ci_low) && !std::isnan(r.auc_ci_high))
        auc_cell += " (" + cell(r.auc_ci_low) + "-" + cell(r.auc_ci_high) + ")";

    const std::size_t label_w = std::max<std::size_t>(row_label.size(), 5) + 2;
    const std::size_t auc_w = std::max<std::size_t>(auc_cell.size(), 12) + 2;
    const std::size_t col_w = 8;

    std::string head, row;
    head = "Model";
    pad_to(head, label_w);
    row = row_label;
    pad_to(row, label_w);
    head += "AUC (95% CI)";
    pad_to(head, label_w + auc_w);
    row += auc_cell;
    pad_to(row, label_w + auc_w);
    const char* cols[] = {"Sens.", "Spec.", "PPV", "NPV", "F1", "Acc."};
    const double vals[] = {r.sensitivity, r.specificity, r.ppv, r.npv, r.f1, r.accuracy};
    for (int i = 0; i < 6; ++i) {
        std::size_t w = label_w + auc_w + col_w * static_cast<std::size_t>(i + 1);
        head += cols[i];
        pad_to(head, w);
        row += cell(vals[i]);
        pad_to(row, w);
    }
    while (!head.empty() && head.back() == ' ') head.pop_back();
    while (!row.empty() && row.back() == ' ') row.pop_back();
    return head + "\n" + row + "\n";
}

}  // namespace tgcn

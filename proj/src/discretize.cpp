#include "relaxform/discretize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace relaxform {

namespace {

using Counts = std::array<std::size_t, 2>;

double entropy_bits(const Counts& c) {
  const double n = static_cast<double>(c[0] + c[1]);
  if (n == 0) return 0.0;
  double h = 0.0;
  for (auto k : c) {
    if (k == 0) continue;
    const double p = static_cast<double>(k) / n;
    h -= p * std::log2(p);
  }
  return h;
}

int classes_present(const Counts& c) { return (c[0] > 0) + (c[1] > 0); }

// `sorted` is ordered by value; [lo, hi) is the current partition.
void split_recursive(const std::vector<LabeledValue>& sorted, std::size_t lo, std::size_t hi,
                     std::vector<double>& cuts) {
  Counts total{0, 0};
  for (auto i = lo; i < hi; ++i) ++total[static_cast<int>(sorted[i].label)];
  if (classes_present(total) < 2) return;

  const double n = static_cast<double>(hi - lo);
  const double h_all = entropy_bits(total);
  Counts left{0, 0};
  double best_entropy = INFINITY;
  std::size_t best_at = 0;
  Counts best_left{}, best_right{};
  for (auto i = lo; i + 1 < hi; ++i) {
    ++left[static_cast<int>(sorted[i].label)];
    if (sorted[i].value == sorted[i + 1].value) continue;
    const Counts right{total[0] - left[0], total[1] - left[1]};
    const double nl = static_cast<double>(i + 1 - lo);
    const double e = (nl / n) * entropy_bits(left) + ((n - nl) / n) * entropy_bits(right);
    if (e < best_entropy) {
      best_entropy = e;
      best_at = i;
      best_left = left;
      best_right = right;
    }
  }
  if (!std::isfinite(best_entropy)) return;

  const double gain = h_all - best_entropy;
  const int k = classes_present(total);
  const int k1 = classes_present(best_left);
  const int k2 = classes_present(best_right);
  const double delta = std::log2(std::pow(3.0, k) - 2.0) -
                       (k * h_all - k1 * entropy_bits(best_left) - k2 * entropy_bits(best_right));
  const double threshold = (std::log2(n - 1.0) + delta) / n;
  if (!(gain > threshold)) return;

  split_recursive(sorted, lo, best_at + 1, cuts);
  cuts.push_back((sorted[best_at].value + sorted[best_at + 1].value) / 2.0);
  split_recursive(sorted, best_at + 1, hi, cuts);
}

}  // namespace

std::vector<double> fit_mdlp_cuts(std::span<const LabeledValue> values) {
  std::vector<LabeledValue> sorted(values.begin(), values.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const LabeledValue& a, const LabeledValue& b) { return a.value < b.value; });
  std::vector<double> cuts;
  if (sorted.size() >= 2) split_recursive(sorted, 0, sorted.size(), cuts);
  return cuts;
}

std::vector<double> fit_equal_frequency_cuts(std::span<const double> values, std::size_t bins) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cuts;
  if (bins < 2 || sorted.size() < 2) return cuts;
  for (std::size_t b = 1; b < bins; ++b) {
    const auto at = b * sorted.size() / bins;
    if (at == 0 || at >= sorted.size()) continue;
    if (sorted[at - 1] == sorted[at]) continue;
    const double cut = (sorted[at - 1] + sorted[at]) / 2.0;
    if (cuts.empty() || cut > cuts.back()) cuts.push_back(cut);
  }
  return cuts;
}

std::size_t bin_index(std::span<const double> cuts, double value) {
  return static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), value) - cuts.begin());
}

std::string interval_label(std::span<const double> cuts, std::size_t bin) {
  std::ostringstream out;
  out << '[';
  if (bin == 0) out << "-inf"; else out << cuts[bin - 1];
  out << ',';
  if (bin >= cuts.size()) out << "inf"; else out << cuts[bin];
  out << ')';
  return out.str();
}

}  // namespace relaxform

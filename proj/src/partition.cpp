#include <algorithm>

#include "qtrack/idx.hpp"
#include "rng.hpp"

namespace qtrack {

LogisticData select_and_partition(const IdxDataset& ds, int d1, int d2, int total, int n, std::uint64_t seed,
                                  double lambda) {
  if (d1 == d2 || d1 < 0 || d1 > 9 || d2 < 0 || d2 > 9)
    throw DomainError("select_and_partition: digits must be two distinct values in 0..9");
  if (n < 1 || total < 1) throw DomainError("select_and_partition: total and n must be positive");
  if (total % n != 0)
    throw DomainError("select_and_partition: total " + std::to_string(total) + " is not divisible by " +
                      std::to_string(n) + " nodes");

  std::vector<int> picked;
  int c1 = 0, c2 = 0;
  for (int i = 0; i < ds.count(); ++i) {
    if (ds.labels[i] == d1) ++c1;
    if (ds.labels[i] == d2) ++c2;
    if (ds.labels[i] == d1 || ds.labels[i] == d2) picked.push_back(i);
  }
  if (static_cast<int>(picked.size()) < total)
    throw DomainError("select_and_partition: requested " + std::to_string(total) + " samples but only " +
                      std::to_string(c1) + " of digit " + std::to_string(d1) + " and " + std::to_string(c2) +
                      " of digit " + std::to_string(d2) + " are available");

  // Fisher-Yates with our own draws so the order does not depend on the
  // standard library's shuffle.
  auto rng = detail::make_rng(seed, {0x70617274ULL});
  for (std::size_t i = picked.size(); i > 1; --i) {
    std::swap(picked[i - 1], picked[static_cast<std::size_t>(rng() % i)]);
  }
  picked.resize(static_cast<std::size_t>(total));

  const int m = total / n;
  LogisticData out;
  out.lambda = lambda;
  for (int node = 0; node < n; ++node) {
    Eigen::MatrixXd x(m, ds.images.cols());
    Eigen::VectorXd y(m);
    for (int j = 0; j < m; ++j) {
      const int src = picked[static_cast<std::size_t>(node * m + j)];
      x.row(j) = ds.images.row(src);
      y(j) = ds.labels[src] == d1 ? -1.0 : 1.0;
    }
    out.features.push_back(std::move(x));
    out.labels.push_back(std::move(y));
  }
  return out;
}

}  // namespace qtrack

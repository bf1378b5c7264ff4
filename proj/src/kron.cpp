// Kronecker-product algebra kernels. All tensor data is flat C-order
// (lexicographic multi-index, last index fastest); matricizations are
// row-major views of the same storage, never copies.
#include "nlef/kron.hpp"

#include <algorithm>
#include <cmath>

namespace nlef {

namespace {

// Number of distinct positions in the permutation orbit of a sorted
// multi-index: k! / prod_i (multiplicity_i!).
double orbit_size(const int* sorted, int k) {
  double count = 1.0;
  // multinomial computed incrementally: count *= (j+1)/(run length so far)
  int run = 1;
  for (int j = 1; j < k; ++j) {
    run = (sorted[j] == sorted[j - 1]) ? run + 1 : 1;
    count *= static_cast<double>(j + 1) / static_cast<double>(run);
  }
  return count;
}

}  // namespace

Vec kron_power(const Vec& x, int k) {
  if (k < 1) throw InvalidArgument("kron_power: k must be >= 1");
  const Eigen::Index n = x.size();
  if (n < 1) throw InvalidArgument("kron_power: empty vector");
  Vec v = x;
  for (int j = 1; j < k; ++j) {
    Vec w(v.size() * n);
    for (Eigen::Index a = 0; a < v.size(); ++a) w.segment(a * n, n) = v(a) * x;
    v.swap(w);
  }
  return v;
}

Vec symmetrize(const Vec& c, int n, int k) {
  const std::int64_t len = ipow(n, k);
  if (c.size() != len) throw InvalidArgument("symmetrize: length(c) != n^k");
  if (k == 1 || n == 1) return c;

  // Pass 1: accumulate each orbit's total at its canonical (sorted) index.
  Vec acc = Vec::Zero(len);
  std::vector<int> digits(k);
  std::vector<std::int64_t> stride(k);
  stride[k - 1] = 1;
  for (int j = k - 2; j >= 0; --j) stride[j] = stride[j + 1] * n;
  for (std::int64_t idx = 0; idx < len; ++idx) {
    std::int64_t rem = idx;
    for (int j = 0; j < k; ++j) {
      digits[j] = static_cast<int>(rem / stride[j]);
      rem -= static_cast<std::int64_t>(digits[j]) * stride[j];
    }
    std::sort(digits.begin(), digits.end());
    std::int64_t canon = 0;
    for (int j = 0; j < k; ++j) canon += static_cast<std::int64_t>(digits[j]) * stride[j];
    acc(canon) += c(idx);
  }

  // Pass 2: redistribute each orbit total equally over its positions.
  Vec out(len);
  for (std::int64_t idx = 0; idx < len; ++idx) {
    std::int64_t rem = idx;
    for (int j = 0; j < k; ++j) {
      digits[j] = static_cast<int>(rem / stride[j]);
      rem -= static_cast<std::int64_t>(digits[j]) * stride[j];
    }
    std::sort(digits.begin(), digits.end());
    std::int64_t canon = 0;
    for (int j = 0; j < k; ++j) canon += static_cast<std::int64_t>(digits[j]) * stride[j];
    out(idx) = acc(canon) / orbit_size(digits.data(), k);
  }
  return out;
}

Vec kron_sum_apply(const Mat& M, const Vec& v, int d) {
  if (d < 1) throw InvalidArgument("kron_sum_apply: d must be >= 1");
  const Eigen::Index p = M.rows();
  const Eigen::Index n = M.cols();
  if (n < 1 || p < 1) throw InvalidArgument("kron_sum_apply: empty M");
  if (v.size() != ipow(n, d))
    throw InvalidArgument("kron_sum_apply: length(v) != n^d for n = cols(M)");

  const std::int64_t out_len = p * ipow(n, d - 1);
  Vec out = Vec::Zero(out_len);
  for (int s = 0; s < d; ++s) {
    const std::int64_t lead = ipow(n, s);            // indices before the slot
    const std::int64_t trail = ipow(n, d - 1 - s);   // indices after the slot
    for (std::int64_t a = 0; a < lead; ++a) {
      Eigen::Map<const RowMat> block(v.data() + a * n * trail, n, trail);
      Eigen::Map<RowMat> dst(out.data() + a * p * trail, p, trail);
      dst.noalias() += M * block;
    }
  }
  return out;
}

double contract_full(const Vec& c, int n, int k, const Vec& x) {
  if (x.size() != n) throw InvalidArgument("contract_full: dim(x) != n");
  if (c.size() != ipow(n, k)) throw InvalidArgument("contract_full: length(c) != n^k");
  Vec buf = c;
  Eigen::Index len = buf.size();
  Vec tmp(len / n + 1);
  for (int j = 0; j < k; ++j) {
    Eigen::Map<const RowMat> view(buf.data(), len / n, n);
    tmp.head(len / n).noalias() = view * x;
    len /= n;
    buf.head(len) = tmp.head(len);
  }
  return buf(0);
}

Vec contract_to_vector(const Vec& c, int n, int k, const Vec& x) {
  if (x.size() != n) throw InvalidArgument("contract_to_vector: dim(x) != n");
  if (c.size() != ipow(n, k)) throw InvalidArgument("contract_to_vector: length(c) != n^k");
  Vec buf = c;
  Eigen::Index len = buf.size();
  Vec tmp(len / n + 1);
  for (int j = 0; j < k - 1; ++j) {
    Eigen::Map<const RowMat> view(buf.data(), len / n, n);
    tmp.head(len / n).noalias() = view * x;
    len /= n;
    buf.head(len) = tmp.head(len);
  }
  return buf.head(n);
}

double poly_eval(const EnergyCoefficients& ec, const Vec& x) {
  if (x.size() != ec.n) throw InvalidArgument("poly_eval: dim(x) != n");
  double total = 0.0;
  for (const auto& [k, c] : ec.coeffs) total += contract_full(c, ec.n, k, x);
  return 0.5 * total;
}

Vec poly_gradient(const EnergyCoefficients& ec, const Vec& x) {
  if (x.size() != ec.n) throw InvalidArgument("poly_gradient: dim(x) != n");
  Vec g = Vec::Zero(ec.n);
  for (const auto& [k, c] : ec.coeffs) g += (0.5 * k) * contract_to_vector(c, ec.n, k, x);
  return g;
}

}  // namespace nlef

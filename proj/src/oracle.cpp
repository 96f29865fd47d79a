// Brute-force reference state built from truncated ladder operators.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "heraldq/error.hpp"
#include "heraldq/fock_core.hpp"

namespace heraldq {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kConvergence = 1e-14;
constexpr int kMaxSingleModeDim = 2400;

MatrixXd annihilation(int dim) {
  MatrixXd a = MatrixXd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// S(-r) D(alpha) |0> on a dim-dimensional truncated space.
VectorXd single_mode_state(double r, double alpha, int dim) {
  const MatrixXd a = annihilation(dim);
  const MatrixXd ad = a.transpose();
  const MatrixXd gen_d = alpha * (ad - a);
  const MatrixXd gen_s = 0.5 * r * (ad * ad - a * a);
  VectorXd vac = VectorXd::Zero(dim);
  vac(0) = 1.0;
  const VectorXd displaced = gen_d.exp() * vac;
  return gen_s.exp() * displaced;
}

// Grow the single-mode space until the first `keep` components stop moving.
VectorXd converged_single_mode(double r, double alpha, int keep) {
  int dim = keep + 32;
  VectorXd prev = single_mode_state(r, alpha, dim);
  while (true) {
    const int next = dim + std::max(32, dim / 2);
    if (next > kMaxSingleModeDim) {
      std::ostringstream msg;
      msg << "oracle: single-mode space did not converge below dimension "
          << kMaxSingleModeDim << " at r=" << r << ", alpha=" << alpha;
      throw TruncationError(msg.str());
    }
    VectorXd cur = single_mode_state(r, alpha, next);
    const double diff = (cur.head(keep) - prev.head(keep)).cwiseAbs().maxCoeff();
    if (diff < kConvergence) return cur.head(keep);
    prev = std::move(cur);
    dim = next;
  }
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(int x, int y) { parent[find(x)] = find(y); }
};

}  // namespace

AmplitudeMatrix oracle_state(const SqueezedInput& input, int n_max) {
  if (n_max < 1) throw ValidationError("oracle_state: n_max must be >= 1");

  // Two-mode box with per-mode dimension 2 n_max + 1: every output (n1, n2)
  // with n1, n2 <= n_max is reached only through states inside the box.
  const int dim = 2 * n_max + 1;
  const VectorXd psi = converged_single_mode(input.r(), input.alpha(), dim);

  auto idx = [dim](int i, int j) { return i * dim + j; };
  const int size = dim * dim;

  // Generator of B^dagger(0): -(pi/4)(a^dagger b - a b^dagger), stored sparsely.
  struct Entry {
    int row, col;
    double value;
  };
  std::vector<Entry> gen;
  const double theta = std::numbers::pi / 4.0;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      // a^dagger b |i, j> = sqrt((i+1) j) |i+1, j-1>
      if (i + 1 < dim && j >= 1)
        gen.push_back({idx(i + 1, j - 1), idx(i, j),
                       -theta * std::sqrt(static_cast<double>((i + 1) * j))});
      // a b^dagger |i, j> = sqrt(i (j+1)) |i-1, j+1>
      if (i >= 1 && j + 1 < dim)
        gen.push_back({idx(i - 1, j + 1), idx(i, j),
                       theta * std::sqrt(static_cast<double>(i * (j + 1)))});
    }
  }

  DisjointSets sets(size);
  for (const auto& e : gen) sets.join(e.row, e.col);

  std::vector<std::vector<int>> blocks(size);
  for (int s = 0; s < size; ++s) blocks[sets.find(s)].push_back(s);
  std::vector<int> local(size, -1);
  std::vector<std::vector<Entry>> block_entries(size);
  for (const auto& e : gen) block_entries[sets.find(e.row)].push_back(e);

  VectorXd in = VectorXd::Zero(size);
  for (int i = 0; i < dim; ++i) in(idx(i, 0)) = psi(i);
  VectorXd out = VectorXd::Zero(size);

  for (int root = 0; root < size; ++root) {
    const auto& members = blocks[root];
    if (members.empty()) continue;
    bool touched = false;
    for (int s : members) touched = touched || in(s) != 0.0;
    if (!touched) continue;

    const int m = static_cast<int>(members.size());
    for (int q = 0; q < m; ++q) local[members[q]] = q;
    MatrixXd g = MatrixXd::Zero(m, m);
    for (const auto& e : block_entries[root]) g(local[e.row], local[e.col]) += e.value;
    VectorXd v(m);
    for (int q = 0; q < m; ++q) v(q) = in(members[q]);
    const VectorXd w = g.exp() * v;
    for (int q = 0; q < m; ++q) out(members[q]) = w(q);
  }

  AmplitudeMatrix result;
  result.entries = FockTable(n_max);
  for (int n1 = 0; n1 <= n_max; ++n1)
    for (int n2 = 0; n2 <= n_max; ++n2) result.entries(n1, n2) = out(idx(n1, n2));
  result.arithmetic = Arithmetic::binary64;
  result.inner_cutoff = dim - 1;
  return result;
}

}  // namespace heraldq

#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "remi/error.hpp"

namespace remi {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Index = Eigen::Index;

/// Marginal inner products ytilde_j = X_j'y / n plus the sample size that
/// produced them. The unit-free input of the covariance-form objective.
struct MarginalVector {
  VectorXd values;
  long n = 0;
};

/// Per-variable univariate regression output: effect sizes and squared
/// standard errors from a single study of n samples.
struct SummaryStats {
  VectorXd beta_m;
  VectorXd s2;
  long n = 0;

  Index size() const { return beta_m.size(); }
};

/// Ordered half-open ranges [start, end) that tile 0..p.
struct BlockPartition {
  struct Range {
    Index start = 0;
    Index end = 0;
    Index size() const { return end - start; }
  };
  std::vector<Range> blocks;

  Index p() const { return blocks.empty() ? 0 : blocks.back().end; }
  std::size_t count() const { return blocks.size(); }

  static BlockPartition single(Index p) {
    BlockPartition part;
    part.blocks.push_back({0, p});
    return part;
  }

  /// Fixed-width windows of `width` (last block may be shorter).
  static BlockPartition fixed_width(Index p, Index width) {
    if (p < 1 || width < 1)
      throw Error(ErrorCode::InvalidArgument, "fixed_width: p and width must be >= 1");
    BlockPartition part;
    for (Index s = 0; s < p; s += width)
      part.blocks.push_back({s, std::min(s + width, p)});
    return part;
  }
};

enum class MatrixKind { Covariance, Correlation };

/// Block-diagonal symmetric matrix: one dense block per partition range.
/// kappa records the shrinkage that produced the blocks (1 = none).
struct BlockMatrixSet {
  BlockPartition partition;
  std::vector<MatrixXd> blocks;
  MatrixKind kind = MatrixKind::Correlation;
  double kappa = 1.0;

  Index p() const { return partition.p(); }

  /// y = M x with M the block-diagonal matrix.
  VectorXd multiply(const VectorXd& x) const {
    if (x.size() != p())
      throw Error(ErrorCode::DimensionMismatch, "block multiply: dimension mismatch");
    VectorXd y(x.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto& r = partition.blocks[b];
      y.segment(r.start, r.size()).noalias() = blocks[b] * x.segment(r.start, r.size());
    }
    return y;
  }

  VectorXd diagonal() const {
    VectorXd d(p());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto& r = partition.blocks[b];
      d.segment(r.start, r.size()) = blocks[b].diagonal();
    }
    return d;
  }
};

/// Sparse coefficient vector: sorted (index, value) pairs over 0..p.
struct SparseCoefs {
  Index p = 0;
  std::vector<Index> index;
  std::vector<double> value;

  Index nnz() const { return static_cast<Index>(index.size()); }

  VectorXd dense() const {
    VectorXd v = VectorXd::Zero(p);
    for (std::size_t k = 0; k < index.size(); ++k) v[index[k]] = value[k];
    return v;
  }

  static SparseCoefs from_dense(const VectorXd& v) {
    SparseCoefs s;
    s.p = v.size();
    for (Index j = 0; j < v.size(); ++j)
      if (v[j] != 0.0) {
        s.index.push_back(j);
        s.value.push_back(v[j]);
      }
    return s;
  }
};

/// Solution path over a decreasing lambda grid: coefficients, the smooth
/// part of the objective, and nonzero counts per grid point.
struct CoefficientPath {
  VectorXd lambdas;
  std::vector<SparseCoefs> coefs;
  VectorXd objective;
  std::vector<Index> df;
  std::vector<char> converged;  // per grid point; fit continues either way

  Index size() const { return lambdas.size(); }
  bool all_converged() const {
    for (char c : converged)
      if (!c) return false;
    return true;
  }
};

/// Generative settings for one synthetic dataset family.
struct SimScenario {
  Index p = 0;
  long n = 0;       // sample size behind the summary statistics
  long n_ind = 0;   // individual-level sample size
  long n_r = 0;     // reference panel size
  long n_test = 0;  // held-out pair
  double alpha = 0.0;
  double h2 = 0.0;
  Index block_size = 0;
  double rho = 0.0;
  std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// Validation: total functions that report every violated invariant.
// ---------------------------------------------------------------------------

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }

  void fail(std::string msg) { violations.push_back(std::move(msg)); }

  std::string joined() const {
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "; ";
      out += v;
    }
    return out;
  }
};

namespace detail {
inline bool finite(double x) { return std::isfinite(x); }

inline void check_finite_vector(const VectorXd& v, const char* name,
                                ValidationReport& rep) {
  for (Index j = 0; j < v.size(); ++j)
    if (!finite(v[j])) {
      std::ostringstream os;
      os << name << " not finite at " << j;
      rep.fail(os.str());
    }
}
}  // namespace detail

inline ValidationReport validate(const MarginalVector& m) {
  ValidationReport rep;
  if (m.values.size() < 1) rep.fail("p must be >= 1");
  if (m.n < 1) rep.fail("n must be >= 1");
  detail::check_finite_vector(m.values, "values", rep);
  return rep;
}

inline ValidationReport validate(const SummaryStats& s) {
  ValidationReport rep;
  if (s.beta_m.size() < 1) rep.fail("p must be >= 1");
  if (s.beta_m.size() != s.s2.size()) rep.fail("beta_m and s2 lengths differ");
  if (s.n < 1) rep.fail("n must be >= 1");
  detail::check_finite_vector(s.beta_m, "beta_m", rep);
  for (Index j = 0; j < s.s2.size(); ++j)
    if (!detail::finite(s.s2[j]) || s.s2[j] <= 0.0) {
      std::ostringstream os;
      os << "s2 not strictly positive at " << j;
      rep.fail(os.str());
    }
  return rep;
}

inline ValidationReport validate(const BlockPartition& part) {
  ValidationReport rep;
  if (part.blocks.empty()) {
    rep.fail("partition has no blocks");
    return rep;
  }
  Index expect = 0;
  for (std::size_t b = 0; b < part.blocks.size(); ++b) {
    const auto& r = part.blocks[b];
    if (r.end <= r.start) {
      std::ostringstream os;
      os << "empty block at " << b;
      rep.fail(os.str());
    }
    if (r.start != expect) {
      std::ostringstream os;
      os << "gap or overlap before block " << b;
      rep.fail(os.str());
    }
    expect = r.end;
  }
  return rep;
}

inline ValidationReport validate(const BlockMatrixSet& set) {
  ValidationReport rep = validate(set.partition);
  if (set.blocks.size() != set.partition.count())
    rep.fail("block count does not match partition");
  if (set.kappa < 0.0 || set.kappa > 1.0) rep.fail("kappa outside [0,1]");
  const std::size_t nb = std::min(set.blocks.size(), set.partition.count());
  for (std::size_t b = 0; b < nb; ++b) {
    const MatrixXd& m = set.blocks[b];
    const Index len = set.partition.blocks[b].size();
    if (m.rows() != len || m.cols() != len) {
      std::ostringstream os;
      os << "block " << b << " dimensions do not match its range";
      rep.fail(os.str());
      continue;
    }
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = i; j < m.cols(); ++j) {
        if (!detail::finite(m(i, j))) {
          std::ostringstream os;
          os << "block " << b << " not finite at (" << i << "," << j << ")";
          rep.fail(os.str());
        }
        if (std::abs(m(i, j) - m(j, i)) > 1e-12) {
          std::ostringstream os;
          os << "block " << b << " not symmetric at (" << i << "," << j << ")";
          rep.fail(os.str());
        }
        if (set.kind == MatrixKind::Correlation) {
          if (i == j && std::abs(m(i, i) - 1.0) > 1e-12) {
            std::ostringstream os;
            os << "block " << b << " diagonal != 1 at (" << i << "," << i << ")";
            rep.fail(os.str());
          }
          if (i != j && std::abs(m(i, j)) > 1.0) {
            std::ostringstream os;
            os << "block " << b << " off-diagonal > 1 at (" << i << "," << j << ")";
            rep.fail(os.str());
          }
        }
      }
    if (m.rows() > 0 && m.allFinite()) {
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
      if (es.info() == Eigen::Success && es.eigenvalues().minCoeff() < -1e-10) {
        std::ostringstream os;
        os << "block " << b << " not positive semidefinite (min eigenvalue "
           << es.eigenvalues().minCoeff() << ")";
        rep.fail(os.str());
      }
    }
  }
  return rep;
}

inline ValidationReport validate(const CoefficientPath& path) {
  ValidationReport rep;
  const Index D = path.lambdas.size();
  if (static_cast<Index>(path.coefs.size()) != D ||
      path.objective.size() != D || static_cast<Index>(path.df.size()) != D)
    rep.fail("path fields have inconsistent lengths");
  for (Index l = 0; l < D; ++l) {
    if (path.lambdas[l] <= 0.0) {
      std::ostringstream os;
      os << "lambda not positive at " << l;
      rep.fail(os.str());
    }
    if (l > 0 && path.lambdas[l] >= path.lambdas[l - 1]) {
      std::ostringstream os;
      os << "lambdas not strictly decreasing at " << l;
      rep.fail(os.str());
    }
  }
  const Index limit = std::min<Index>(D, static_cast<Index>(path.coefs.size()));
  for (Index l = 0; l < limit; ++l) {
    if (l < static_cast<Index>(path.df.size()) &&
        path.coefs[l].nnz() != path.df[l]) {
      std::ostringstream os;
      os << "df does not equal nonzero count at " << l;
      rep.fail(os.str());
    }
  }
  return rep;
}

inline ValidationReport validate(const SimScenario& sc) {
  ValidationReport rep;
  if (sc.p < 1) rep.fail("p must be >= 1");
  if (sc.n < 1) rep.fail("n must be >= 1");
  if (sc.n_ind < 1) rep.fail("n_ind must be >= 1");
  if (sc.n_r < 1) rep.fail("n_r must be >= 1");
  if (sc.n_test < 1) rep.fail("n_test must be >= 1");
  if (!(sc.alpha > 0.0 && sc.alpha < 1.0)) rep.fail("alpha outside (0,1)");
  if (!(sc.h2 > 0.0 && sc.h2 < 1.0)) rep.fail("h2 outside (0,1)");
  if (sc.block_size < 1) rep.fail("block_size must be >= 1");
  if (!(sc.rho >= 0.0 && sc.rho < 1.0)) rep.fail("rho outside [0,1)");
  return rep;
}

}  // namespace remi

// SPDX-License-Identifier: Apache-2.0

#include "wpcn/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace wpcn::conic {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Block-diagonal element of the symmetric cone: dense symmetric matrix
// blocks (the embedded Hermitian cones) plus one non-negative diagonal
// block holding scalars and slacks.
struct BlockVec {
  std::vector<Eigen::MatrixXd> mats;
  Eigen::VectorXd diag;

  static BlockVec zeros_like(const BlockVec& ref) {
    BlockVec out;
    out.mats.reserve(ref.mats.size());
    for (const auto& m : ref.mats) out.mats.push_back(Eigen::MatrixXd::Zero(m.rows(), m.cols()));
    out.diag = Eigen::VectorXd::Zero(ref.diag.size());
    return out;
  }

  static BlockVec identity_like(const BlockVec& ref, double scale) {
    BlockVec out;
    out.mats.reserve(ref.mats.size());
    for (const auto& m : ref.mats)
      out.mats.push_back(scale * Eigen::MatrixXd::Identity(m.rows(), m.cols()));
    out.diag = Eigen::VectorXd::Constant(ref.diag.size(), scale);
    return out;
  }

  BlockVec& axpy(double alpha, const BlockVec& other) {
    for (std::size_t i = 0; i < mats.size(); ++i) mats[i] += alpha * other.mats[i];
    diag += alpha * other.diag;
    return *this;
  }

  BlockVec& scale(double alpha) {
    for (auto& m : mats) m *= alpha;
    diag *= alpha;
    return *this;
  }

  double inner(const BlockVec& other) const {
    double acc = diag.dot(other.diag);
    for (std::size_t i = 0; i < mats.size(); ++i)
      acc += (mats[i].array() * other.mats[i].array()).sum();
    return acc;
  }

  double max_abs() const {
    double v = diag.size() ? diag.cwiseAbs().maxCoeff() : 0.0;
    for (const auto& m : mats)
      if (m.size()) v = std::max(v, m.cwiseAbs().maxCoeff());
    return v;
  }

  double frob() const { return std::sqrt(inner(*this)); }

  void symmetrize() {
    for (auto& m : mats) m = 0.5 * (m + m.transpose()).eval();
  }
};

struct Factorization {
  std::vector<Eigen::LLT<Eigen::MatrixXd>> llts;
  bool ok = true;
};

Factorization factor(const BlockVec& x) {
  Factorization f;
  f.llts.reserve(x.mats.size());
  for (const auto& m : x.mats) {
    f.llts.emplace_back(m);
    if (f.llts.back().info() != Eigen::Success) f.ok = false;
  }
  if (x.diag.size() && x.diag.minCoeff() <= 0.0) f.ok = false;
  return f;
}

// Largest step alpha with x + alpha dx staying in the cone, via the
// minimum eigenvalue of L^-1 dx L^-T per block.
double step_to_boundary(const BlockVec& x, const Factorization& fx, const BlockVec& dx) {
  double alpha = kInf;
  for (std::size_t i = 0; i < x.mats.size(); ++i) {
    if (!x.mats[i].size()) continue;
    const auto& L = fx.llts[i].matrixL();
    Eigen::MatrixXd t = L.solve(dx.mats[i]);
    t = L.solve(t.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (t + t.transpose()),
                                                      Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
  }
  for (Eigen::Index k = 0; k < x.diag.size(); ++k) {
    if (dx.diag(k) < 0.0) alpha = std::min(alpha, -x.diag(k) / dx.diag(k));
  }
  return alpha;
}

struct StandardForm {
  std::vector<int> mat_dims;       // embedded dims (2 * complex dim)
  int n_scalars = 0;               // original scalars
  int n_slacks = 0;
  std::vector<BlockVec> rows;      // A_i
  Eigen::VectorXd b;
  BlockVec c;
  std::vector<int> slack_of_row;   // index into diag tail, -1 for equalities
  int diag_size() const { return n_scalars + n_slacks; }
};

StandardForm to_standard_form(const SdpSubproblem& sp) {
  StandardForm sf;
  for (int d : sp.psd_block_dims) sf.mat_dims.push_back(2 * d);
  sf.n_scalars = sp.n_scalars;
  for (const auto& row : sp.constraints)
    if (row.sense != Sense::Equal) ++sf.n_slacks;

  auto fresh = [&]() {
    BlockVec v;
    for (int d : sf.mat_dims) v.mats.push_back(Eigen::MatrixXd::Zero(d, d));
    v.diag = Eigen::VectorXd::Zero(sf.diag_size());
    return v;
  };

  // Embedded coefficients carry a 1/2 so that <emb(A)/2, emb(V)> = Tr(A V).
  auto fill_blocks = [&](BlockVec& v, const std::vector<Eigen::MatrixXcd>& blocks) {
    for (std::size_t n = 0; n < blocks.size(); ++n) {
      if (!blocks[n].size()) continue;
      v.mats[n] = 0.5 * hermitian_to_real_embedding(blocks[n]);
    }
  };

  sf.c = fresh();
  fill_blocks(sf.c, sp.objective_blocks);
  if (sp.objective_scalars.size()) sf.c.diag.head(sp.n_scalars) = sp.objective_scalars;

  sf.b.resize(static_cast<Eigen::Index>(sp.constraints.size()));
  int slack = sf.n_scalars;
  for (std::size_t i = 0; i < sp.constraints.size(); ++i) {
    const auto& row = sp.constraints[i];
    BlockVec a = fresh();
    fill_blocks(a, row.block_coeffs);
    if (row.scalar_coeffs.size()) a.diag.head(sp.n_scalars) = row.scalar_coeffs;
    int si = -1;
    if (row.sense == Sense::LessEqual) {
      si = slack++;
      a.diag(si) = 1.0;
    } else if (row.sense == Sense::GreaterEqual) {
      si = slack++;
      a.diag(si) = -1.0;
    }
    sf.slack_of_row.push_back(si);
    sf.b(static_cast<Eigen::Index>(i)) = row.rhs;
    sf.rows.push_back(std::move(a));
  }
  return sf;
}

Eigen::VectorXd apply_a(const StandardForm& sf, const BlockVec& x) {
  Eigen::VectorXd out(sf.b.size());
  for (Eigen::Index i = 0; i < sf.b.size(); ++i)
    out(i) = sf.rows[static_cast<std::size_t>(i)].inner(x);
  return out;
}

BlockVec apply_at(const StandardForm& sf, const Eigen::VectorXd& y) {
  BlockVec out = BlockVec::zeros_like(sf.c);
  for (Eigen::Index i = 0; i < y.size(); ++i)
    out.axpy(y(i), sf.rows[static_cast<std::size_t>(i)]);
  return out;
}

double lambda_max(const BlockVec& v) {
  double lm = -kInf;
  for (const auto& m : v.mats) {
    if (!m.size()) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    lm = std::max(lm, es.eigenvalues().maxCoeff());
  }
  if (v.diag.size()) lm = std::max(lm, v.diag.maxCoeff());
  return lm;
}

}  // namespace

Eigen::MatrixXd hermitian_to_real_embedding(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("embedding: matrix not square");
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > kHermTol * std::max(1.0, a.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("embedding: matrix not Hermitian");
  }
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = a.real();
  m.bottomRightCorner(n, n) = a.real();
  m.topRightCorner(n, n) = -a.imag();
  m.bottomLeftCorner(n, n) = a.imag();
  return 0.5 * (m + m.transpose()).eval();
}

Eigen::MatrixXcd real_embedding_to_hermitian(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw std::invalid_argument("embedding: bad dimensions");
  }
  const Eigen::Index n = m.rows() / 2;
  const Eigen::MatrixXd re = 0.5 * (m.topLeftCorner(n, n) + m.bottomRightCorner(n, n));
  const Eigen::MatrixXd im = 0.5 * (m.bottomLeftCorner(n, n) - m.topRightCorner(n, n));
  Eigen::MatrixXcd a = re.cast<std::complex<double>>();
  a += std::complex<double>(0, 1) * im.cast<std::complex<double>>();
  return 0.5 * (a + a.adjoint()).eval();
}

void SdpSubproblem::validate() const {
  auto check_blocks = [&](const std::vector<Eigen::MatrixXcd>& blocks, const char* what) {
    if (blocks.size() > psd_block_dims.size()) {
      throw std::invalid_argument(std::string("SdpSubproblem: too many blocks in ") + what);
    }
    for (std::size_t n = 0; n < blocks.size(); ++n) {
      if (!blocks[n].size()) continue;
      if (blocks[n].rows() != psd_block_dims[n] || blocks[n].cols() != psd_block_dims[n]) {
        throw std::invalid_argument(std::string("SdpSubproblem: block dim mismatch in ") + what);
      }
      const double scale = std::max(1.0, blocks[n].cwiseAbs().maxCoeff());
      if ((blocks[n] - blocks[n].adjoint()).cwiseAbs().maxCoeff() > kHermTol * scale) {
        throw std::invalid_argument(std::string("SdpSubproblem: non-Hermitian block in ") + what);
      }
    }
  };
  check_blocks(objective_blocks, "objective");
  if (objective_scalars.size() && objective_scalars.size() != n_scalars) {
    throw std::invalid_argument("SdpSubproblem: objective scalar size mismatch");
  }
  for (const auto& row : constraints) {
    check_blocks(row.block_coeffs, row.label.empty() ? "constraint" : row.label.c_str());
    if (row.scalar_coeffs.size() && row.scalar_coeffs.size() != n_scalars) {
      throw std::invalid_argument("SdpSubproblem: row scalar size mismatch");
    }
  }
}

SdpSolution solve(const SdpSubproblem& sp, const SolverOptions& opts) {
  sp.validate();
  StandardForm sf = to_standard_form(sp);
  const std::size_t m = sf.rows.size();

  SdpSolution sol;
  sol.v_blocks.resize(sp.psd_block_dims.size());
  sol.dual_blocks.resize(sp.psd_block_dims.size());

  int ndim = sf.diag_size();
  for (int d : sf.mat_dims) ndim += d;
  if (ndim == 0 || m == 0) {
    // Degenerate: nothing to optimize.
    sol.status = m == 0 ? SolveStatus::Optimal : SolveStatus::NumericalTrouble;
    sol.scalars = Eigen::VectorXd::Zero(sp.n_scalars);
    sol.row_duals = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    for (std::size_t n = 0; n < sp.psd_block_dims.size(); ++n) {
      sol.v_blocks[n] = Eigen::MatrixXcd::Zero(sp.psd_block_dims[n], sp.psd_block_dims[n]);
      sol.dual_blocks[n] = sp.objective_blocks.size() > n && sp.objective_blocks[n].size()
                               ? sp.objective_blocks[n]
                               : Eigen::MatrixXcd::Zero(sp.psd_block_dims[n], sp.psd_block_dims[n]);
    }
    return sol;
  }

  // Scale data so the canonical identity start is well placed.
  const double sb = std::max(1.0, sf.b.size() ? sf.b.cwiseAbs().maxCoeff() : 0.0);
  const double sc = std::max(1.0, sf.c.max_abs());
  Eigen::VectorXd b = sf.b / sb;
  BlockVec c = sf.c;
  c.scale(1.0 / sc);

  double amax = 1.0;
  for (const auto& row : sf.rows) amax = std::max(amax, row.max_abs());
  const double rho = std::max({10.0, std::sqrt(static_cast<double>(ndim)), 2.0 * amax});

  BlockVec x = BlockVec::identity_like(sf.c, rho);
  BlockVec s = BlockVec::identity_like(sf.c, rho);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));

  const double bnorm = 1.0 + b.cwiseAbs().maxCoeff();
  const double cnorm = 1.0 + c.max_abs();

  auto finalize = [&](SolveStatus status) {
    sol.status = status;
    // Un-scale: X carries sb, (y, S) carry sc.
    BlockVec xs = x;
    xs.scale(sb);
    BlockVec ss = s;
    ss.scale(sc);
    Eigen::VectorXd ys = y * sc;
    sol.scalars = xs.diag.head(sp.n_scalars);
    sol.row_duals = ys;
    for (std::size_t n = 0; n < sp.psd_block_dims.size(); ++n) {
      sol.v_blocks[n] = real_embedding_to_hermitian(xs.mats[n]);
      sol.dual_blocks[n] = 2.0 * real_embedding_to_hermitian(ss.mats[n]);
    }
    sol.scalar_reduced_costs = ss.diag.head(sp.n_scalars);
    sol.objective_value = sf.c.inner(xs);
  };

  double best_err = kInf;
  int stall = 0;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    sol.iterations = iter;
    const Eigen::VectorXd rp = b - apply_a(sf, x);
    BlockVec rd = c;
    rd.axpy(-1.0, s).axpy(-1.0, apply_at(sf, y));

    const double pobj = c.inner(x);
    const double dobj = b.dot(y);
    const double pres = rp.cwiseAbs().maxCoeff() / bnorm;
    const double dres = rd.max_abs() / cnorm;
    const double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    sol.primal_residual = pres;
    sol.dual_residual = dres;
    sol.rel_gap = relgap;

    if (pres <= opts.tol_feas && dres <= opts.tol_feas && relgap <= opts.tol_gap) {
      finalize(SolveStatus::Optimal);
      return sol;
    }

    // Dual improving ray => primal infeasible (Farkas certificate).
    const double ynorm = y.size() ? y.cwiseAbs().maxCoeff() : 0.0;
    if (ynorm > 1e3) {
      Eigen::VectorXd yn = y / ynorm;
      const BlockVec p = apply_at(sf, yn);
      const double on = b.dot(yn);
      if (on > 1e-10 && lambda_max(p) <= 1e-9 * std::max(on, p.max_abs() * 1e-3)) {
        finalize(SolveStatus::Infeasible);
        return sol;
      }
      if (ynorm > 1e13) {
        finalize(SolveStatus::NumericalTrouble);
        return sol;
      }
    }

    const double err = std::max({pres, dres, relgap});
    if (err < best_err * 0.9) {
      best_err = err;
      stall = 0;
    } else if (++stall >= 8) {
      if (pres <= opts.acceptable_feas && dres <= opts.acceptable_feas &&
          relgap <= opts.acceptable_gap) {
        finalize(SolveStatus::Optimal);
      } else {
        finalize(SolveStatus::NumericalTrouble);
      }
      return sol;
    }

    const Factorization fx = factor(x);
    const Factorization fs = factor(s);
    if (!fx.ok || !fs.ok) {
      finalize(SolveStatus::NumericalTrouble);
      return sol;
    }

    // S^-1 per block.
    BlockVec sinv = BlockVec::zeros_like(s);
    for (std::size_t i = 0; i < s.mats.size(); ++i) {
      if (!s.mats[i].size()) continue;
      sinv.mats[i] =
          fs.llts[i].solve(Eigen::MatrixXd::Identity(s.mats[i].rows(), s.mats[i].cols()));
    }
    sinv.diag = s.diag.cwiseInverse();

    const double mu = x.inner(s) / static_cast<double>(ndim);

    // Schur complement M_ij = <A_i, sym(X A_j S^-1)>.
    Eigen::MatrixXd schur(m, m);
    std::vector<BlockVec> g(m);
    for (std::size_t j = 0; j < m; ++j) {
      BlockVec gj = BlockVec::zeros_like(x);
      for (std::size_t blk = 0; blk < x.mats.size(); ++blk) {
        if (!x.mats[blk].size()) continue;
        Eigen::MatrixXd t = x.mats[blk] * sf.rows[j].mats[blk] * sinv.mats[blk];
        gj.mats[blk] = 0.5 * (t + t.transpose());
      }
      gj.diag = x.diag.cwiseProduct(sf.rows[j].diag).cwiseProduct(sinv.diag);
      g[j] = std::move(gj);
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        schur(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            schur(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
                0.5 * (sf.rows[i].inner(g[j]) + sf.rows[j].inner(g[i]));

    Eigen::LLT<Eigen::MatrixXd> mllt(schur);
    double ridge = 1e-14 * (1.0 + schur.trace() / static_cast<double>(m));
    while (mllt.info() != Eigen::Success && ridge < 1e-4 * (1.0 + schur.trace())) {
      mllt.compute(schur + ridge * Eigen::MatrixXd::Identity(m, m));
      ridge *= 100.0;
    }
    if (mllt.info() != Eigen::Success) {
      finalize(SolveStatus::NumericalTrouble);
      return sol;
    }

    // Direction for a complementarity target K: dX S + X dS = K - X S.
    auto direction = [&](const std::vector<Eigen::MatrixXd>& kmats,
                         const Eigen::VectorXd& kdiag, BlockVec& dx, Eigen::VectorXd& dy,
                         BlockVec& ds) {
      // base = sym((K - X S) S^-1) = sym(K S^-1) - X  (before the dS part)
      BlockVec base = BlockVec::zeros_like(x);
      for (std::size_t blk = 0; blk < x.mats.size(); ++blk) {
        if (!x.mats[blk].size()) continue;
        Eigen::MatrixXd t = kmats[blk] * sinv.mats[blk] - x.mats[blk] -
                            x.mats[blk] * rd.mats[blk] * sinv.mats[blk];
        base.mats[blk] = 0.5 * (t + t.transpose());
      }
      base.diag = kdiag.cwiseProduct(sinv.diag) - x.diag -
                  x.diag.cwiseProduct(rd.diag).cwiseProduct(sinv.diag);
      Eigen::VectorXd rhs = rp - apply_a(sf, base);
      dy = mllt.solve(rhs);
      ds = rd;
      ds.axpy(-1.0, apply_at(sf, dy));
      // dx = base + sym(X A^T(dy) S^-1)
      dx = base;
      const BlockVec atdy = apply_at(sf, dy);
      for (std::size_t blk = 0; blk < x.mats.size(); ++blk) {
        if (!x.mats[blk].size()) continue;
        Eigen::MatrixXd t = x.mats[blk] * atdy.mats[blk] * sinv.mats[blk];
        dx.mats[blk] += 0.5 * (t + t.transpose());
      }
      dx.diag += x.diag.cwiseProduct(atdy.diag).cwiseProduct(sinv.diag);
    };

    // Predictor (affine scaling).
    std::vector<Eigen::MatrixXd> kzero;
    for (const auto& mm : x.mats) kzero.push_back(Eigen::MatrixXd::Zero(mm.rows(), mm.cols()));
    Eigen::VectorXd kzdiag = Eigen::VectorXd::Zero(x.diag.size());
    BlockVec dxa, dsa;
    Eigen::VectorXd dya;
    direction(kzero, kzdiag, dxa, dya, dsa);

    const double apa = std::min(1.0, 0.98 * step_to_boundary(x, fx, dxa));
    const double ada = std::min(1.0, 0.98 * step_to_boundary(s, fs, dsa));
    BlockVec xa = x, sa = s;
    xa.axpy(apa, dxa);
    sa.axpy(ada, dsa);
    const double mu_aff = xa.inner(sa) / static_cast<double>(ndim);
    double sigma = std::pow(mu_aff / mu, 3.0);
    sigma = std::clamp(sigma, 1e-10, 1.0);

    // Corrector: K = sigma mu I - dXa dSa.
    std::vector<Eigen::MatrixXd> kmats;
    kmats.reserve(x.mats.size());
    for (std::size_t blk = 0; blk < x.mats.size(); ++blk) {
      Eigen::MatrixXd k = sigma * mu *
                          Eigen::MatrixXd::Identity(x.mats[blk].rows(), x.mats[blk].cols());
      if (x.mats[blk].size()) k -= dxa.mats[blk] * dsa.mats[blk];
      kmats.push_back(std::move(k));
    }
    Eigen::VectorXd kdiag = Eigen::VectorXd::Constant(x.diag.size(), sigma * mu) -
                            dxa.diag.cwiseProduct(dsa.diag);

    BlockVec dx, ds;
    Eigen::VectorXd dy;
    direction(kmats, kdiag, dx, dy, ds);

    const double ap = std::min(1.0, 0.98 * step_to_boundary(x, fx, dx));
    const double ad = std::min(1.0, 0.98 * step_to_boundary(s, fs, ds));
    x.axpy(ap, dx);
    y += ad * dy;
    s.axpy(ad, ds);
    x.symmetrize();
    s.symmetrize();
  }

  if (sol.primal_residual <= opts.acceptable_feas && sol.dual_residual <= opts.acceptable_feas &&
      sol.rel_gap <= opts.acceptable_gap) {
    finalize(SolveStatus::Optimal);
  } else {
    finalize(SolveStatus::NumericalTrouble);
  }
  return sol;
}

KktReport verify_kkt(const SdpSubproblem& sp, const SdpSolution& sol) {
  KktReport rep;
  const std::size_t nb = sp.psd_block_dims.size();

  // Primal feasibility of each row against the original data.
  for (std::size_t i = 0; i < sp.constraints.size(); ++i) {
    const auto& row = sp.constraints[i];
    double lhs = 0.0;
    for (std::size_t n = 0; n < row.block_coeffs.size(); ++n) {
      if (!row.block_coeffs[n].size()) continue;
      lhs += (row.block_coeffs[n].adjoint() * sol.v_blocks[n]).trace().real();
    }
    if (row.scalar_coeffs.size()) lhs += row.scalar_coeffs.dot(sol.scalars);
    const double scale = 1.0 + std::abs(row.rhs);
    double viol = 0.0;
    if (row.sense == Sense::LessEqual) viol = std::max(0.0, lhs - row.rhs);
    else if (row.sense == Sense::GreaterEqual) viol = std::max(0.0, row.rhs - lhs);
    else viol = std::abs(lhs - row.rhs);
    rep.max_primal_violation = std::max(rep.max_primal_violation, viol / scale);

    const double yv = sol.row_duals(static_cast<Eigen::Index>(i));
    if (row.sense == Sense::LessEqual) {
      rep.dual_sign_violation = std::max(rep.dual_sign_violation, std::max(0.0, yv));
    } else if (row.sense == Sense::GreaterEqual) {
      rep.dual_sign_violation = std::max(rep.dual_sign_violation, std::max(0.0, -yv));
    }
  }

  // Stationarity and complementarity per PSD block.
  rep.min_dual_block_eig = 0.0;
  for (std::size_t n = 0; n < nb; ++n) {
    const int d = sp.psd_block_dims[n];
    Eigen::MatrixXcd yn = Eigen::MatrixXcd::Zero(d, d);
    if (n < sp.objective_blocks.size() && sp.objective_blocks[n].size())
      yn = sp.objective_blocks[n];
    for (std::size_t i = 0; i < sp.constraints.size(); ++i) {
      const auto& row = sp.constraints[i];
      if (n < row.block_coeffs.size() && row.block_coeffs[n].size())
        yn -= sol.row_duals(static_cast<Eigen::Index>(i)) * row.block_coeffs[n];
    }
    const double scale = 1.0 + yn.cwiseAbs().maxCoeff();
    rep.stationarity.push_back((yn - sol.dual_blocks[n]).cwiseAbs().maxCoeff() / scale);
    const double comp = std::abs((sol.dual_blocks[n].adjoint() * sol.v_blocks[n]).trace().real());
    const double cscale = 1.0 + std::abs((sol.v_blocks[n]).trace().real()) * scale;
    rep.complementarity.push_back(comp / cscale);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sol.dual_blocks[n], Eigen::EigenvaluesOnly);
    if (es.eigenvalues().size())
      rep.min_dual_block_eig = std::min(rep.min_dual_block_eig, es.eigenvalues().minCoeff() / scale);
  }

  for (Eigen::Index k = 0; k < sol.scalars.size(); ++k) {
    rep.scalar_complementarity = std::max(
        rep.scalar_complementarity,
        std::abs(sol.scalars(k) * sol.scalar_reduced_costs(k)) / (1.0 + std::abs(sol.scalars(k))));
  }

  double pobj = sol.scalars.size() && sp.objective_scalars.size()
                    ? sp.objective_scalars.dot(sol.scalars)
                    : 0.0;
  for (std::size_t n = 0; n < nb; ++n) {
    if (n < sp.objective_blocks.size() && sp.objective_blocks[n].size())
      pobj += (sp.objective_blocks[n].adjoint() * sol.v_blocks[n]).trace().real();
  }
  double dobj = 0.0;
  for (std::size_t i = 0; i < sp.constraints.size(); ++i)
    dobj += sp.constraints[i].rhs * sol.row_duals(static_cast<Eigen::Index>(i));
  rep.recomputed_gap = std::abs(pobj - dobj) / std::max(1.0, std::abs(pobj));

  rep.max_residual = std::max({rep.max_primal_violation, rep.dual_sign_violation,
                               rep.scalar_complementarity, rep.recomputed_gap,
                               -rep.min_dual_block_eig});
  for (double v : rep.stationarity) rep.max_residual = std::max(rep.max_residual, v);
  for (double v : rep.complementarity) rep.max_residual = std::max(rep.max_residual, v);
  return rep;
}

void dump_subproblem(const SdpSubproblem& sp, std::ostream& os) {
  os << "blocks";
  for (int d : sp.psd_block_dims) os << ' ' << d;
  os << "\nscalars " << sp.n_scalars << "\n";
  auto put_blocks = [&](const std::vector<Eigen::MatrixXcd>& blocks) {
    for (std::size_t n = 0; n < blocks.size(); ++n) {
      if (!blocks[n].size()) continue;
      os << " block " << n << "\n";
      for (Eigen::Index r = 0; r < blocks[n].rows(); ++r) {
        os << "  ";
        for (Eigen::Index c2 = 0; c2 < blocks[n].cols(); ++c2) {
          os << blocks[n](r, c2).real() << (blocks[n](r, c2).imag() < 0 ? "" : "+")
             << blocks[n](r, c2).imag() << "j ";
        }
        os << "\n";
      }
    }
  };
  os << "objective\n";
  put_blocks(sp.objective_blocks);
  if (sp.objective_scalars.size()) os << " scalars " << sp.objective_scalars.transpose() << "\n";
  for (const auto& row : sp.constraints) {
    os << "row sense="
       << (row.sense == Sense::Equal ? "==" : row.sense == Sense::LessEqual ? "<=" : ">=")
       << " rhs=" << row.rhs << " label=" << row.label << "\n";
    put_blocks(row.block_coeffs);
    if (row.scalar_coeffs.size()) os << " scalars " << row.scalar_coeffs.transpose() << "\n";
  }
}

}  // namespace wpcn::conic

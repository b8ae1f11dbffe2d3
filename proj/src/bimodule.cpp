#include "fusionlab/bimodule.hpp"

#include <stdexcept>
#include <utility>

#include "fusionlab/errors.hpp"
#include "fusionlab/numeric.hpp"
#include "fusionlab/random.hpp"

namespace fusionlab {

namespace {

Mat weighted_sum(const std::vector<Mat>& mats, const Vec& w, int dim) {
  Mat out = Mat::Zero(dim, dim);
  for (Eigen::Index u = 0; u < w.size(); ++u)
    if (w(u) != 0.0) out += w(u) * mats[u];
  return out;
}

}  // namespace

Mat HilbertBimodule::lact(const AlgElem& x) const {
  return weighted_sum(L, alg.coords(x), dim);
}

Mat HilbertBimodule::ract(const AlgElem& x) const {
  return weighted_sum(R, alg.coords(x), dim);
}

int star_index(const Algebra& alg, int u) {
  for (int k = 0; k < alg.nblocks(); ++k) {
    int n = alg.block_size(k);
    int lo = alg.offset(k);
    if (u < lo + n * n) {
      int rel = u - lo;
      return lo + (rel % n) * n + rel / n;
    }
  }
  throw AlgebraMismatch("matrix unit index out of range");
}

CheckReport check_bimodule(const HilbertBimodule& h) {
  CheckReport rep;
  const Algebra& alg = h.alg;
  const int d = h.dim;
  if (static_cast<int>(h.L.size()) != alg.dim() ||
      static_cast<int>(h.R.size()) != alg.dim()) {
    rep.add_flag("action_count", false);
    return rep;
  }
  for (const auto& m : h.L)
    if (m.rows() != d || m.cols() != d) {
      rep.add_flag("action_shape", false);
      return rep;
    }
  for (const auto& m : h.R)
    if (m.rows() != d || m.cols() != d) {
      rep.add_flag("action_shape", false);
      return rep;
    }

  // unit acts as identity on both sides
  Mat lu = h.lact(alg.unit());
  Mat ru = h.ract(alg.unit());
  Mat id = Mat::Identity(d, d);
  rep.add("left_unital", (lu - id).norm(), 1e-10);
  rep.add("right_unital", (ru - id).norm(), 1e-10);

  // multiplicativity over matrix-unit products; right side order-reversing
  double lmul = 0.0, rmul = 0.0, lstar = 0.0, rstar = 0.0, comm = 0.0;
  auto units = alg.matrix_unit_basis();
  for (int u = 0; u < alg.dim(); ++u) {
    for (int v = 0; v < alg.dim(); ++v) {
      AlgElem uv = alg.mul(units[u], units[v]);
      lmul = std::max(lmul, (h.L[u] * h.L[v] - h.lact(uv)).norm());
      rmul = std::max(rmul, (h.R[u] * h.R[v] - h.ract(alg.mul(units[v], units[u]))).norm());
      comm = std::max(comm, (h.L[u] * h.R[v] - h.R[v] * h.L[u]).norm());
    }
    int us = star_index(alg, u);
    lstar = std::max(lstar, (h.L[u].adjoint() - h.L[us]).norm());
    rstar = std::max(rstar, (h.R[u].adjoint() - h.R[us]).norm());
  }
  rep.add("left_multiplicative", lmul, 1e-10);
  rep.add("right_antimultiplicative", rmul, 1e-10);
  rep.add("left_star", lstar, 1e-10);
  rep.add("right_star", rstar, 1e-10);
  rep.add("actions_commute", comm, 1e-10);
  return rep;
}

HilbertBimodule make_bimodule(const Algebra& alg, std::vector<Mat> left,
                              std::vector<Mat> right) {
  HilbertBimodule h{alg, left.empty() ? 0 : static_cast<int>(left[0].rows()),
                    std::move(left), std::move(right)};
  if (static_cast<int>(h.L.size()) != alg.dim() ||
      static_cast<int>(h.R.size()) != alg.dim())
    throw NotHomomorphism("need one action matrix per matrix unit");
  CheckReport rep = check_bimodule(h);
  for (const auto& r : rep.records) {
    if (r.pass) continue;
    if (r.name == "actions_commute")
      throw ActionsDoNotCommute("left and right actions fail to commute");
    throw NotHomomorphism("action is not a unital *-homomorphism: " + r.name);
  }
  return h;
}

HilbertBimodule make_bimodule(const Algebra& alg, std::vector<Mat> left,
                              std::vector<Mat> right, const Mat& gram) {
  const int d = gram.rows() ? static_cast<int>(gram.rows()) : 0;
  Mat id = Mat::Identity(d, d);
  if ((gram - id).norm() <= 1e-12) {
    return make_bimodule(alg, std::move(left), std::move(right));
  }
  // canonicalize: v -> G^{1/2} v is inner-product preserving onto the
  // standard basis, actions transform by conjugation
  Mat gh = psd_power(hermitize(gram), 0.5);
  Mat ghi = psd_power(hermitize(gram), -0.5);
  for (auto& m : left) m = gh * m * ghi;
  for (auto& m : right) m = gh * m * ghi;
  return make_bimodule(alg, std::move(left), std::move(right));
}

DirectSum direct_sum(const HilbertBimodule& h, const HilbertBimodule& k) {
  h.alg.require_same(k.alg);
  HilbertBimodule s;
  s.alg = h.alg;
  s.dim = h.dim + k.dim;
  s.L.reserve(h.L.size());
  s.R.reserve(h.R.size());
  for (int u = 0; u < h.alg.dim(); ++u) {
    Mat l = Mat::Zero(s.dim, s.dim), r = Mat::Zero(s.dim, s.dim);
    l.topLeftCorner(h.dim, h.dim) = h.L[u];
    l.bottomRightCorner(k.dim, k.dim) = k.L[u];
    r.topLeftCorner(h.dim, h.dim) = h.R[u];
    r.bottomRightCorner(k.dim, k.dim) = k.R[u];
    s.L.push_back(std::move(l));
    s.R.push_back(std::move(r));
  }
  DirectSum out;
  out.inj1 = Mat::Zero(s.dim, h.dim);
  out.inj1.topRows(h.dim) = Mat::Identity(h.dim, h.dim);
  out.inj2 = Mat::Zero(s.dim, k.dim);
  out.inj2.bottomRows(k.dim) = Mat::Identity(k.dim, k.dim);
  out.proj1 = out.inj1.adjoint();
  out.proj2 = out.inj2.adjoint();
  out.sum = std::move(s);
  return out;
}

HilbertBimodule direct_sum_list(const Algebra& alg,
                                const std::vector<HilbertBimodule>& parts) {
  HilbertBimodule acc;
  acc.alg = alg;
  acc.dim = 0;
  acc.L.assign(alg.dim(), Mat::Zero(0, 0));
  acc.R.assign(alg.dim(), Mat::Zero(0, 0));
  for (const auto& p : parts) acc = direct_sum(acc, p).sum;
  return acc;
}

HilbertBimodule conjugate(const HilbertBimodule& h) {
  HilbertBimodule c;
  c.alg = h.alg;
  c.dim = h.dim;
  c.L.resize(h.L.size());
  c.R.resize(h.R.size());
  // b |> conj(v) = conj(v <| b*),  conj(v) <| b = conj(b* |> v)
  for (int u = 0; u < h.alg.dim(); ++u) {
    int us = star_index(h.alg, u);
    c.L[u] = h.R[us].conjugate();
    c.R[u] = h.L[us].conjugate();
  }
  return c;
}

HilbertBimodule conjugate_by_unitary(const HilbertBimodule& h, const Mat& q) {
  HilbertBimodule out;
  out.alg = h.alg;
  out.dim = static_cast<int>(q.rows());
  out.L.resize(h.L.size());
  out.R.resize(h.R.size());
  for (std::size_t u = 0; u < h.L.size(); ++u) {
    out.L[u] = q * h.L[u] * q.adjoint();
    out.R[u] = q * h.R[u] * q.adjoint();
  }
  return out;
}

namespace {

// Stacked intertwining system rows for X A_u = B_u X over all units;
// col-major vec, one block row per unit.
Mat intertwiner_system(const std::vector<Mat>& a, const std::vector<Mat>& b,
                       int src_dim, int tgt_dim) {
  const int nu = static_cast<int>(a.size());
  Mat sys(static_cast<Eigen::Index>(nu) * src_dim * tgt_dim,
          static_cast<Eigen::Index>(src_dim) * tgt_dim);
  Mat idt = Mat::Identity(tgt_dim, tgt_dim);
  Mat ids = Mat::Identity(src_dim, src_dim);
  for (int u = 0; u < nu; ++u) {
    sys.middleRows(static_cast<Eigen::Index>(u) * src_dim * tgt_dim,
                   static_cast<Eigen::Index>(src_dim) * tgt_dim) =
        kron(a[u].transpose(), idt) - kron(ids, b[u]);
  }
  return sys;
}

std::vector<Mat> unvec_columns(const Mat& cols, int rows, int colsz) {
  std::vector<Mat> out;
  out.reserve(cols.cols());
  for (Eigen::Index j = 0; j < cols.cols(); ++j) {
    Mat x(rows, colsz);
    for (int c = 0; c < colsz; ++c)
      x.col(c) = cols.col(j).segment(static_cast<Eigen::Index>(c) * rows, rows);
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

HomSpace hom_space(const HilbertBimodule& src, const HilbertBimodule& tgt,
                   Side side) {
  src.alg.require_same(tgt.alg);
  const Algebra& alg = src.alg;
  HomSpace hs;
  hs.side = side;
  const auto& a = (side == Side::right_module_maps) ? src.R : src.L;
  const auto& b = (side == Side::right_module_maps) ? tgt.R : tgt.L;
  if (src.dim == 0 || tgt.dim == 0) {
    hs.L.assign(alg.dim(), Mat::Zero(0, 0));
    hs.R.assign(alg.dim(), Mat::Zero(0, 0));
    return hs;
  }
  Mat null = solve_nullspace(intertwiner_system(a, b, src.dim, tgt.dim));
  hs.basis = unvec_columns(null, tgt.dim, src.dim);

  const int n = hs.dim();
  hs.L.assign(alg.dim(), Mat::Zero(n, n));
  hs.R.assign(alg.dim(), Mat::Zero(n, n));
  double worst = 0.0;
  for (int u = 0; u < alg.dim(); ++u) {
    for (int j = 0; j < n; ++j) {
      Mat lx, rx;
      if (side == Side::right_module_maps) {
        lx = tgt.L[u] * hs.basis[j];
        rx = hs.basis[j] * src.L[u];
      } else {
        lx = hs.basis[j] * src.R[u];
        rx = tgt.R[u] * hs.basis[j];
      }
      Mat lrec = Mat::Zero(tgt.dim, src.dim);
      Mat rrec = Mat::Zero(tgt.dim, src.dim);
      for (int i = 0; i < n; ++i) {
        hs.L[u](i, j) = (hs.basis[i].adjoint() * lx).trace();
        hs.R[u](i, j) = (hs.basis[i].adjoint() * rx).trace();
        lrec += hs.L[u](i, j) * hs.basis[i];
        rrec += hs.R[u](i, j) * hs.basis[i];
      }
      // the induced action must stay inside the solved space
      worst = std::max(worst, (lrec - lx).norm());
      worst = std::max(worst, (rrec - rx).norm());
    }
  }
  if (worst > 1e-8)
    throw NotIntertwiner("hom-space action leaks outside the intertwiner space");
  return hs;
}

Vec HomSpace::coeffs(const Mat& x) const {
  Vec c(dim());
  for (int i = 0; i < dim(); ++i) c(i) = (basis[i].adjoint() * x).trace();
  return c;
}

Mat HomSpace::materialize(const Vec& c) const {
  if (basis.empty()) return Mat::Zero(0, 0);
  Mat x = Mat::Zero(basis[0].rows(), basis[0].cols());
  for (int i = 0; i < dim(); ++i) x += c(i) * basis[i];
  return x;
}

HilbertBimodule HomSpace::as_bimodule(const Algebra& alg) const {
  return HilbertBimodule{alg, dim(), L, R};
}

std::vector<Mat> hom_both(const HilbertBimodule& src,
                          const HilbertBimodule& tgt) {
  src.alg.require_same(tgt.alg);
  if (src.dim == 0 || tgt.dim == 0) return {};
  Mat right = intertwiner_system(src.R, tgt.R, src.dim, tgt.dim);
  Mat left = intertwiner_system(src.L, tgt.L, src.dim, tgt.dim);
  Mat sys(right.rows() + left.rows(), right.cols());
  sys.topRows(right.rows()) = right;
  sys.bottomRows(left.rows()) = left;
  return unvec_columns(solve_nullspace(sys), tgt.dim, src.dim);
}

double intertwining_residual(const HilbertBimodule& src,
                             const HilbertBimodule& tgt, const Mat& x,
                             MorphKind kind) {
  double worst = 0.0;
  for (int u = 0; u < src.alg.dim(); ++u) {
    if (kind != MorphKind::right_only)
      worst = std::max(worst, (x * src.L[u] - tgt.L[u] * x).norm());
    if (kind != MorphKind::left_only)
      worst = std::max(worst, (x * src.R[u] - tgt.R[u] * x).norm());
  }
  return worst;
}

void require_intertwiner(const HilbertBimodule& src,
                         const HilbertBimodule& tgt, const Mat& x,
                         MorphKind kind, double tol) {
  double r = intertwining_residual(src, tgt, x, kind);
  if (r > tol * std::max(1.0, x.norm()))
    throw NotIntertwiner("intertwining residual " + std::to_string(r));
}

Mat iso_conj_hom(const HomSpace& from, const HomSpace& to) {
  Mat map(to.dim(), from.dim());
  for (int f = 0; f < from.dim(); ++f)
    map.col(f) = to.coeffs(from.basis[f].adjoint()).conjugate();
  return map;
}

Mat iso_dagger(const HomSpace& from, const HomSpace& to) {
  Mat map(to.dim(), from.dim());
  for (int f = 0; f < from.dim(); ++f)
    map.col(f) = to.coeffs(from.basis[f].conjugate()).conjugate();
  return map;
}

HilbertBimodule model_bimodule(const Algebra& alg, int k, int l) {
  const int nk = alg.block_size(k), nl = alg.block_size(l);
  const int d = nk * nl;
  auto idx = [nl](int a, int b) { return a * nl + b; };
  HilbertBimodule h;
  h.alg = alg;
  h.dim = d;
  h.L.assign(alg.dim(), Mat::Zero(d, d));
  h.R.assign(alg.dim(), Mat::Zero(d, d));
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nk; ++j) {
      Mat& m = h.L[alg.unit_index(k, i, j)];
      for (int b = 0; b < nl; ++b) m(idx(i, b), idx(j, b)) = 1.0;
    }
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nl; ++j) {
      Mat& m = h.R[alg.unit_index(l, i, j)];
      for (int a = 0; a < nk; ++a) m(idx(a, j), idx(a, i)) = 1.0;
    }
  return h;
}

HilbertBimodule random_multiplicity_bimodule(
    const Algebra& alg, const std::vector<std::vector<int>>& mult,
    std::uint64_t seed) {
  std::vector<HilbertBimodule> parts;
  for (int k = 0; k < alg.nblocks(); ++k)
    for (int l = 0; l < alg.nblocks(); ++l) {
      int m = (k < static_cast<int>(mult.size()) &&
               l < static_cast<int>(mult[k].size()))
                  ? mult[k][l]
                  : 0;
      for (int c = 0; c < m; ++c) parts.push_back(model_bimodule(alg, k, l));
    }
  HilbertBimodule sum = direct_sum_list(alg, parts);
  if (sum.dim == 0) return sum;
  Rng rng(seed);
  return conjugate_by_unitary(sum, random_unitary(rng, sum.dim));
}

MultiplicityTable multiplicity_table(const HilbertBimodule& h) {
  const Algebra& alg = h.alg;
  MultiplicityTable t;
  t.counts.assign(alg.nblocks(), std::vector<int>(alg.nblocks(), 0));
  int total = 0;
  for (int k = 0; k < alg.nblocks(); ++k)
    for (int l = 0; l < alg.nblocks(); ++l) {
      int m = static_cast<int>(hom_both(model_bimodule(alg, k, l), h).size());
      t.counts[k][l] = m;
      total += m * alg.block_size(k) * alg.block_size(l);
    }
  t.remainder = h.dim - total;
  return t;
}

}  // namespace fusionlab

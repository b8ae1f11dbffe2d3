#include "fusionlab/duality.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fusionlab/errors.hpp"
#include "fusionlab/numeric.hpp"
#include "fusionlab/random.hpp"

namespace fusionlab {
namespace {

void internal_check(bool ok, const char* what) {
  if (!ok) {
    throw std::logic_error(std::string("internal check failed: ") + what);
  }
}

// Phase of the entry of largest modulus, first in row-major scan order.
Cx pin_phase(const Mat& m) {
  double best = -1.0;
  Cx top = 1.0;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      double a = std::abs(m(i, j));
      if (a > best) {
        best = a;
        top = m(i, j);
      }
    }
  }
  if (best < 1e-14) return Cx(1.0, 0.0);
  return top / std::abs(top);
}

Mat fix_phase(const Mat& m) { return m / pin_phase(m); }

// Value of a scalar matrix; rejects anything visibly non-scalar.
Cx scalar_of(const Mat& m, const char* what) {
  internal_check(m.rows() == m.cols() && m.rows() > 0, what);
  Cx c = m.trace() / static_cast<double>(m.rows());
  Mat dev = m - c * eye(static_cast<int>(m.rows()));
  internal_check(dev.norm() < 1e-7 * std::max(1.0, std::abs(c)), what);
  return c;
}

// Splits h along the spectral clusters of a seeded random Hermitian
// endomorphism and recurses until every piece has scalar endomorphisms.
// Appends isometries h_dim x piece_dim onto invariant subspaces.
void split_into_minimal(const HilbertBimodule& h, std::uint64_t seed,
                        std::vector<Mat>& out) {
  if (h.dim == 0) return;
  std::vector<Mat> ends = hom_both(h, h);
  internal_check(!ends.empty(), "endomorphism space of a nonzero module");
  if (ends.size() == 1) {
    out.push_back(eye(h.dim));
    return;
  }
  Rng rng(seed);
  Mat a = zeros(h.dim, h.dim);
  for (const Mat& e : ends) a += rng.cnormal() * e;
  a = hermitize(a);
  auto [w, v] = hermitian_eig(a);
  std::vector<int> cuts{0};
  for (int i = 1; i < w.size(); ++i) {
    if (w(i - 1) - w(i) > 1e-6 * std::max(1.0, std::abs(w(i)))) {
      cuts.push_back(i);
    }
  }
  cuts.push_back(static_cast<int>(w.size()));
  // a generic combination separates at least two summands
  internal_check(cuts.size() > 2, "random endomorphism splits the module");
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    Mat cols = v.middleCols(cuts[c], cuts[c + 1] - cuts[c]);
    HilbertBimodule sub = conjugate_by_unitary(h, cols.adjoint());
    std::vector<Mat> inner;
    split_into_minimal(sub, seed + 1, inner);
    for (const Mat& w2 : inner) out.push_back(cols * w2);
  }
}

// Block pair supporting a minimal module: the unique central projections
// acting nonzero on the left and on the right.
std::pair<int, int> support_blocks(const HilbertBimodule& sub) {
  const Algebra& alg = sub.alg;
  int k = -1;
  int l = -1;
  for (int m = 0; m < alg.nblocks(); ++m) {
    AlgElem p = alg.central_projection(m);
    if (sub.lact(p).norm() > 1e-8) {
      internal_check(k < 0, "left support is a single block");
      k = m;
    }
    if (sub.ract(p).norm() > 1e-8) {
      internal_check(l < 0, "right support is a single block");
      l = m;
    }
  }
  internal_check(k >= 0 && l >= 0, "minimal module has support");
  return {k, l};
}

// Both zigzag composites for a candidate pair in the internal orientation
// eta: L2 -> carrier(h (x) hb), eps: carrier(hb (x) h) -> L2.
std::pair<Mat, Mat> zigzag_pair(FusionContext& fc, const HilbertBimodule& h,
                                const HilbertBimodule& hb, const Mat& eta,
                                const Mat& eps) {
  const HilbertBimodule& l2 = fc.l2();
  const FusionResult& fhhb = fc.fuse(h, hb);
  const FusionResult& fhbh = fc.fuse(hb, h);
  Mat id_h = eye(h.dim);
  Mat id_hb = eye(hb.dim);

  Mat lam_h = left_unitor(fc, h);
  Mat f1 = fuse_morphism(fc, fc.fuse(l2, h), fc.fuse(fhhb.carrier, h), eta,
                         id_h);
  Mat a1 = associator(fc, h, hb, h);
  Mat f2 = fuse_morphism(fc, fc.fuse(h, fhbh.carrier), fc.fuse(h, l2), id_h,
                         eps);
  Mat rho_h = right_unitor(fc, h);
  Mat z1 = rho_h * f2 * a1 * f1 * lam_h.adjoint();

  Mat rho_hb = right_unitor(fc, hb);
  Mat g1 = fuse_morphism(fc, fc.fuse(hb, l2), fc.fuse(hb, fhhb.carrier),
                         id_hb, eta);
  Mat a2 = associator(fc, hb, h, hb);
  Mat g2 = fuse_morphism(fc, fc.fuse(fhbh.carrier, hb), fc.fuse(l2, hb), eps,
                         id_hb);
  Mat lam_hb = left_unitor(fc, hb);
  Mat z2 = lam_hb * g2 * a2.adjoint() * g1 * rho_hb.adjoint();
  return {z1, z2};
}

void check_zigzags(FusionContext& fc, const HilbertBimodule& h,
                   const HilbertBimodule& hb, const Mat& eta, const Mat& eps,
                   double tol, const char* what) {
  auto [z1, z2] = zigzag_pair(fc, h, hb, eta, eps);
  internal_check((z1 - eye(h.dim)).norm() <= tol, what);
  internal_check((z2 - eye(hb.dim)).norm() <= tol, what);
}

// eta: L2 -> carrier(h (x) hb) and eps: carrier(hb (x) h) -> L2, assembled
// from the model table along the irreducible decomposition of h.
std::pair<Mat, Mat> assembled_pair(FusionContext& fc, const DualityTable& tab,
                                   const HilbertBimodule& h,
                                   const HilbertBimodule& hb) {
  const FusionResult& fhhb = fc.fuse(h, hb);
  const FusionResult& fhbh = fc.fuse(hb, h);
  Mat eta = zeros(fhhb.rank(), fc.sf().dim());
  Mat eps = zeros(fc.sf().dim(), fhbh.rank());
  for (const IrreduciblePart& part : irreducible_parts(h)) {
    HilbertBimodule mod = model_bimodule(fc.algebra(), part.k, part.l);
    HilbertBimodule modc = conjugate(mod);
    Mat cw = part.embed.conjugate();  // modc -> hb
    Mat fm = fuse_morphism(fc, fc.fuse(mod, modc), fhhb, part.embed, cw);
    eta += fm * tab.eta.at({part.k, part.l});
    Mat gm = fuse_morphism(fc, fc.fuse(modc, mod), fhbh, cw, part.embed);
    eps += tab.eps.at({part.k, part.l}) * gm.adjoint();
  }
  return {eta, eps};
}

}  // namespace

std::vector<IrreduciblePart> irreducible_parts(const HilbertBimodule& h,
                                               std::uint64_t seed) {
  std::vector<Mat> raw;
  split_into_minimal(h, seed, raw);
  std::vector<IrreduciblePart> parts;
  parts.reserve(raw.size());
  for (const Mat& w : raw) {
    HilbertBimodule sub = conjugate_by_unitary(h, w.adjoint());
    auto [k, l] = support_blocks(sub);
    HilbertBimodule mod = model_bimodule(h.alg, k, l);
    std::vector<Mat> u = hom_both(mod, sub);
    internal_check(u.size() == 1, "split piece is minimal");
    double s = std::sqrt((u[0].adjoint() * u[0]).trace().real() /
                         static_cast<double>(u[0].cols()));
    Mat un = fix_phase(u[0] / s);
    internal_check((un.adjoint() * un - eye(mod.dim)).norm() < 1e-8,
                   "normalized embedding is isometric");
    Mat wt = w * un;
    require_intertwiner(mod, h, wt, MorphKind::bimodule, 1e-8);
    parts.push_back({k, l, wt});
  }
  return parts;
}

Mat transpose_identification(const Algebra& alg, int k, int l) {
  const int nk = alg.block_size(k);
  const int nl = alg.block_size(l);
  Mat t = zeros(nl * nk, nk * nl);
  for (int a = 0; a < nk; ++a) {
    for (int b = 0; b < nl; ++b) t(b * nk + a, a * nl + b) = 1.0;
  }
  return t;
}

const DualityTable& model_duality_table(FusionContext& fc) {
  DualityTable& table = fc.duality_table();
  if (table.built) return table;
  const Algebra& alg = fc.algebra();
  for (int k = 0; k < alg.nblocks(); ++k) {
    for (int l = k; l < alg.nblocks(); ++l) {
      HilbertBimodule h = model_bimodule(alg, k, l);
      HilbertBimodule hb = conjugate(h);
      const FusionResult& fhhb = fc.fuse(h, hb);
      const FusionResult& fhbh = fc.fuse(hb, h);
      std::vector<Mat> ecand = hom_both(fc.l2(), fhhb.carrier);
      std::vector<Mat> fcand = hom_both(fhbh.carrier, fc.l2());
      internal_check(ecand.size() == 1 && fcand.size() == 1,
                     "unit and counit spaces are one dimensional");
      Mat eta0 = fix_phase(ecand[0]);
      Mat eps0 = fix_phase(fcand[0]);
      auto [z1, z2] = zigzag_pair(fc, h, hb, eta0, eps0);
      Cx c1 = scalar_of(z1, "first zigzag of a minimal module is scalar");
      Cx c2 = scalar_of(z2, "second zigzag of a minimal module is scalar");
      internal_check(std::abs(c1 - c2) <= 1e-8 * std::abs(c1),
                     "the two zigzag scalars agree");
      if (k == l) {
        // self-conjugate case: normalize against the transpose flip; the
        // square must come out positive (symmetric self-duality).
        Mat ti = transpose_identification(alg, k, k);  // conj(h) -> h
        Mat cti = ti.conjugate();                      // h -> conj(h)
        Mat ftp =
            fuse_morphism(fc, fhbh, fhhb, cti.adjoint(), ti.adjoint());
        Mat cand = eta0.adjoint() * ftp;
        Cx kap = (eps0.adjoint() * cand).trace() /
                 (eps0.adjoint() * eps0).trace();
        internal_check((cand - kap * eps0).norm() <=
                           1e-8 * std::max(1.0, eps0.norm()),
                       "flipped unit is proportional to the counit");
        Cx s2 = 1.0 / (c1 * kap);
        internal_check(std::abs(s2.imag()) <= 1e-8 * std::abs(s2) &&
                           s2.real() > 0.0,
                       "normalization square is positive");
        double s = std::sqrt(s2.real());
        Mat eta = s * eta0;
        Cx ph = pin_phase(eta);
        eta /= ph;
        Mat eps = (s * kap * ph) * eps0;
        check_zigzags(fc, h, hb, eta, eps, 1e-7,
                      "normalized zigzags on a diagonal minimal module");
        table.eta[{k, k}] = eta;
        table.eps[{k, k}] = eps;
      } else {
        Cx st = 1.0 / c1;
        double s = std::sqrt(std::abs(st));
        Cx t = st / s;
        Mat eta = s * eta0;
        Cx ph = pin_phase(eta);
        eta /= ph;
        Mat eps = (t * ph) * eps0;
        check_zigzags(fc, h, hb, eta, eps, 1e-7,
                      "normalized zigzags on an off-diagonal minimal module");
        table.eta[{k, l}] = eta;
        table.eps[{k, l}] = eps;
        // transport through the transpose so the (l,k) solution is the
        // adjoint data of the (k,l) one
        HilbertBimodule hl = model_bimodule(alg, l, k);
        HilbertBimodule hlb = conjugate(hl);
        Mat ti = transpose_identification(alg, k, l);  // hb -> hl
        Mat cti = ti.conjugate();                      // h -> hlb
        Mat g = fuse_morphism(fc, fhbh, fc.fuse(hl, hlb), ti, cti);
        Mat eta_lk = g * eps.adjoint();
        Mat ftp = fuse_morphism(fc, fc.fuse(hlb, hl), fhhb, cti.adjoint(),
                                ti.adjoint());
        Mat eps_lk = eta.adjoint() * ftp;
        check_zigzags(fc, hl, hlb, eta_lk, eps_lk, 1e-7,
                      "transported zigzags on the flipped minimal module");
        table.eta[{l, k}] = eta_lk;
        table.eps[{l, k}] = eps_lk;
      }
    }
  }
  table.built = true;
  return table;
}

DualityData duality_data(FusionContext& fc, const HilbertBimodule& h) {
  const DualityTable& table = model_duality_table(fc);
  HilbertBimodule hb = conjugate(h);
  auto [eta, eps] = assembled_pair(fc, table, h, hb);
  check_zigzags(fc, h, hb, eta, eps, 1e-9, "assembled zigzags");
  // self-duality: assembling for the conjugate gives the adjoint data
  HilbertBimodule hbb = conjugate(hb);
  auto [etab, epsb] = assembled_pair(fc, table, hb, hbb);
  internal_check((epsb - eta.adjoint()).norm() <=
                     1e-9 * std::max(1.0, eta.norm()),
                 "counit of the conjugate is the adjoint unit");
  internal_check((etab - eps.adjoint()).norm() <=
                     1e-9 * std::max(1.0, eps.norm()),
                 "unit of the conjugate is the adjoint counit");
  DualityData dd;
  dd.module = h;
  dd.dual = std::move(hb);
  dd.eta = eta.adjoint();
  dd.eps = eps.adjoint();
  return dd;
}

std::pair<Mat, Mat> zigzag_maps(FusionContext& fc, const DualityData& dd) {
  return zigzag_pair(fc, dd.module, dd.dual, dd.eta.adjoint(),
                     dd.eps.adjoint());
}

LeftRightComparison bounded_left_right_iso(FusionContext& fc,
                                           const HilbertBimodule& h,
                                           const DualityData& dd) {
  if (bimodule_key(dd.module) != bimodule_key(h)) {
    throw MissingDualityData("duality data belongs to a different module");
  }
  const StandardForm& sf = fc.sf();
  LeftRightComparison out;
  out.from = fc.bounded(h).hom;
  out.to = hom_space(fc.l2(), h, Side::left_module_maps);
  const int n = out.from.dim();
  internal_check(out.to.dim() == n,
                 "left and right bounded spaces have equal dimension");
  Mat eta_in = dd.eta.adjoint();  // L2 -> carrier(h (x) dual)
  const FusionResult& fhd = fc.fuse(h, dd.dual);
  const FusionResult& fhl = fc.fuse(h, fc.l2());
  Mat rho = right_unitor(fc, h);
  Mat id_h = eye(h.dim);
  out.matrix = zeros(n, n);
  for (int j = 0; j < n; ++j) {
    // conjugate flip of x: a left-module map dual -> L2
    Mat xp = sf.Jmat() * out.from.basis[j].transpose();
    Mat f = fuse_morphism(fc, fhd, fhl, id_h, xp);
    Mat t = rho * f * eta_in;
    Vec cj = out.to.coeffs(t);
    internal_check(
        (out.to.materialize(cj) - t).norm() <= 1e-8 * std::max(1.0, t.norm()),
        "exchanged map lands in the left bounded space");
    out.matrix.col(j) = cj;
  }
  internal_check(matrix_rank(out.matrix) == n, "exchange map is invertible");
  require_intertwiner(out.from.as_bimodule(fc.algebra()),
                      out.to.as_bimodule(fc.algebra()), out.matrix,
                      MorphKind::bimodule, 1e-8);
  return out;
}

}  // namespace fusionlab

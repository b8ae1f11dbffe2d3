#include "fusionlab/equivalence.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fusionlab/errors.hpp"
#include "fusionlab/numeric.hpp"
#include "fusionlab/random.hpp"

namespace fusionlab {

namespace {

void internal_check(bool ok, const std::string& what) {
  if (!ok) throw std::logic_error("internal check failed: " + what);
}

Vec kron_vec(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

double rel(double resid, double scale) { return resid / std::max(1.0, scale); }

}  // namespace

Mat d_morphism(FusionContext& fc, const HilbertBimodule& from,
               const HilbertBimodule& to, const Mat& f, double tol) {
  require_intertwiner(from, to, f, MorphKind::bimodule, tol);
  const BoundedVectorSpace& dfrom = fc.bounded(from);
  const BoundedVectorSpace& dto = fc.bounded(to);
  Mat out(dto.dim(), dfrom.dim());
  for (int i = 0; i < dfrom.dim(); ++i) {
    Mat img = f * dfrom.hom.basis[i];
    Vec c = dto.hom.coeffs(img);
    internal_check((dto.hom.materialize(c) - img).norm() <=
                       1e-8 * std::max(1.0, img.norm()),
                   "post-composition lands in the bounded vectors");
    out.col(i) = c;
  }
  return out;
}

FunctorImage functor_D(FusionContext& fc, const HilbertBimodule& h,
                       const std::vector<Mat>& endomorphisms) {
  FunctorImage out;
  out.direction = FunctorDirection::hilbert_to_algebraic;
  out.algebraic = bounded_as_algebraic(fc.bounded(h));
  out.morphisms.reserve(endomorphisms.size());
  for (const Mat& f : endomorphisms)
    out.morphisms.push_back(d_morphism(fc, h, h, f));
  return out;
}

L2Pack functor_L2_pack(const StandardForm& sf, const AlgebraicBimodule& a) {
  if (!a.has_inner())
    throw InputError("completion needs an inner product on the source");
  sf.algebra().require_same(a.alg);
  const Algebra& alg = a.alg;
  const int da = a.dim;
  const int dl = sf.dim();
  const Eigen::Index pre = static_cast<Eigen::Index>(da) * dl;

  L2Pack out;
  out.source = a;
  out.l2_dim = dl;

  // Gram of the pre space a (x) L2: block (j, i) acts (e_i, e_j)_M on L2.
  Mat gram = zeros(pre, pre);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) {
      Vec c(alg.dim());
      for (int u = 0; u < alg.dim(); ++u) c(u) = a.w[u](i, j);
      gram.block(static_cast<Eigen::Index>(j) * dl,
                 static_cast<Eigen::Index>(i) * dl, dl, dl) =
          sf.lact(alg.from_coords(c));
    }
  auto [ev, vecs] = hermitian_eig(hermitize(gram));
  const double top = ev.size() > 0 ? std::max(ev(0), 0.0) : 0.0;
  if (ev.size() > 0 && ev(ev.size() - 1) < -1e-9 * std::max(top, 1.0))
    throw DegenerateInnerProduct("extended form has a negative direction");
  const double cut = 1e-11 * std::max(top, 1.0);
  Eigen::Index rank = 0;
  while (rank < ev.size() && ev(rank) > cut) ++rank;
  if (pre > 0 && rank == 0)
    throw DegenerateInnerProduct("extended form vanishes");

  RVec root = ev.head(rank).cwiseSqrt();
  out.q = root.cast<Cx>().asDiagonal() * vecs.leftCols(rank).adjoint();
  out.section =
      vecs.leftCols(rank) * root.cwiseInverse().cast<Cx>().asDiagonal();
  out.null_basis = vecs.rightCols(ev.size() - rank);

  auto units = alg.matrix_unit_basis();
  std::vector<Mat> left(alg.dim()), right(alg.dim());
  for (int u = 0; u < alg.dim(); ++u) {
    Mat xl = kron(a.L[u], eye(dl));
    Mat xr = kron(eye(da), sf.ract(units[u]));
    internal_check((out.q * xl * out.null_basis).norm() <=
                       1e-8 * std::max(1.0, xl.norm()),
                   "left action preserves the degenerate directions");
    internal_check((out.q * xr * out.null_basis).norm() <=
                       1e-8 * std::max(1.0, xr.norm()),
                   "right action preserves the degenerate directions");
    left[u] = out.q * xl * out.section;
    right[u] = out.q * xr * out.section;
  }
  out.image = make_bimodule(alg, std::move(left), std::move(right));
  return out;
}

Mat functor_L2_map(const L2Pack& from, const L2Pack& to, const Mat& f,
                   double tol) {
  from.source.alg.require_same(to.source.alg);
  if (f.rows() != to.source.dim || f.cols() != from.source.dim)
    throw InputError("morphism shape does not match the completions");
  Mat m = kron(f, eye(from.l2_dim));
  if ((to.q * m * from.null_basis).norm() > tol * std::max(1.0, m.norm()))
    throw NotIntertwiner("map does not descend to the completions");
  return to.q * m * from.section;
}

FunctorImage functor_L2(const StandardForm& sf, const AlgebraicBimodule& a,
                        const std::vector<Mat>& endomorphisms) {
  L2Pack pack = functor_L2_pack(sf, a);
  FunctorImage out;
  out.direction = FunctorDirection::algebraic_to_hilbert;
  out.hilbert = pack.image;
  out.morphisms.reserve(endomorphisms.size());
  HilbertBimodule source_actions = actions_of(a);
  for (const Mat& f : endomorphisms) {
    require_intertwiner(source_actions, source_actions, f,
                        MorphKind::bimodule);
    out.morphisms.push_back(functor_L2_map(pack, pack, f));
  }
  return out;
}

UnitIso unit_iso(FusionContext& fc, const HilbertBimodule& h) {
  const StandardForm& sf = fc.sf();
  const BoundedVectorSpace& d = fc.bounded(h);
  UnitIso out;
  out.pack = functor_L2_pack(sf, bounded_as_algebraic(d));
  const int dl = sf.dim();
  Mat upre(h.dim, static_cast<Eigen::Index>(d.dim()) * dl);
  for (int i = 0; i < d.dim(); ++i)
    upre.middleCols(static_cast<Eigen::Index>(i) * dl, dl) = d.hom.basis[i];
  internal_check((upre * out.pack.null_basis).norm() <=
                     1e-8 * std::max(1.0, upre.norm()),
                 "evaluation kills the degenerate directions");
  out.matrix = upre * out.pack.section;
  out.unitary_residual = std::max(
      (out.matrix * out.matrix.adjoint() - eye(h.dim)).norm(),
      (out.matrix.adjoint() * out.matrix - eye(out.matrix.cols())).norm());
  internal_check(out.unitary_residual <= 1e-8, "evaluation is unitary");
  double worst = 0.0;
  for (int u = 0; u < sf.algebra().dim(); ++u) {
    worst = std::max(worst, (out.matrix * out.pack.image.lunit(u) -
                             h.lunit(u) * out.matrix)
                                .norm());
    worst = std::max(worst, (out.matrix * out.pack.image.runit(u) -
                             h.runit(u) * out.matrix)
                                .norm());
  }
  out.intertwine_residual = worst;
  require_intertwiner(out.pack.image, h, out.matrix, MorphKind::bimodule,
                      1e-8);
  return out;
}

CounitIso counit_iso(FusionContext& fc, const L2Pack& pack) {
  const StandardForm& sf = fc.sf();
  const AlgebraicBimodule& a = pack.source;
  const Algebra& alg = a.alg;
  const int da = a.dim;
  const int dl = pack.l2_dim;

  CounitIso out;
  out.pack = pack;
  out.columns.reserve(static_cast<std::size_t>(da));
  for (int i = 0; i < da; ++i)
    out.columns.push_back(
        pack.q.middleCols(static_cast<Eigen::Index>(i) * dl, dl));

  const BoundedVectorSpace& dimg = fc.bounded(pack.image);
  out.matrix = Mat(dimg.dim(), da);
  for (int i = 0; i < da; ++i) {
    Vec c = dimg.hom.coeffs(out.columns[i]);
    internal_check((dimg.hom.materialize(c) - out.columns[i]).norm() <=
                       1e-8 * std::max(1.0, out.columns[i].norm()),
                   "slices are bounded vectors of the completion");
    out.matrix.col(i) = c;
  }
  internal_check(out.matrix.rows() == out.matrix.cols(),
                 "coefficient map is square");
  internal_check(matrix_rank(out.matrix) == da,
                 "coefficient map is invertible");

  double wscale = 1.0;
  for (const Mat& wm : a.w) wscale = std::max(wscale, wm.norm());
  double inner = 0.0;
  double adj = 0.0;
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) {
      Vec expect(alg.dim());
      for (int u = 0; u < alg.dim(); ++u) expect(u) = a.w[u](i, j);
      AlgElem g = alpha(sf, out.columns[j].adjoint() * out.columns[i]);
      inner = std::max(inner, (alg.coords(g) - expect).norm());
      Mat want = sf.lact(alg.star(alg.from_coords(expect)));
      adj = std::max(
          adj, (out.columns[i].adjoint() * out.columns[j] - want).norm());
    }
  out.inner_residual = inner / wscale;
  out.adjoint_residual = adj / wscale;
  internal_check(out.inner_residual <= 1e-8,
                 "slices reproduce the inner product");
  internal_check(out.adjoint_residual <= 1e-8,
                 "slice adjoints act by the starred inner product");

  require_intertwiner(actions_of(a), actions_of(bounded_as_algebraic(dimg)),
                      out.matrix, MorphKind::bimodule, 1e-7);
  return out;
}

CounitIso counit_iso(FusionContext& fc, const AlgebraicBimodule& a) {
  return counit_iso(fc, functor_L2_pack(fc.sf(), a));
}

MonoidalD monoidal_structure_D(FusionContext& fc, const HilbertBimodule& k,
                               const HilbertBimodule& h) {
  MonoidalD out;
  AlgebraicBimodule ak = bounded_as_algebraic(fc.bounded(k));
  AlgebraicBimodule ah = bounded_as_algebraic(fc.bounded(h));
  out.tensor = relative_tensor(ak, ah);
  const FusionResult& fus = fc.fuse(k, h);
  const BoundedVectorSpace& zd = fc.bounded(fus.carrier);
  out.matrix = mu_matrix(fc, fus, zd.hom) * out.tensor.section;
  internal_check(out.matrix.rows() == out.matrix.cols(),
                 "multiplication map is square");
  internal_check(matrix_rank(out.matrix) == out.tensor.dim(),
                 "multiplication map is invertible");
  AlgebraicBimodule df = bounded_as_algebraic(zd);
  require_intertwiner(actions_of(out.tensor.product), actions_of(df),
                      out.matrix, MorphKind::bimodule, 1e-7);
  double resid = 0.0;
  double scale = 1.0;
  for (std::size_t u = 0; u < df.w.size(); ++u) {
    Mat wt = out.matrix.transpose() * df.w[u] * out.matrix.conjugate();
    resid = std::max(resid, (wt - out.tensor.product.w[u]).norm());
    scale = std::max(scale, df.w[u].norm());
  }
  out.inner_residual = resid / scale;
  internal_check(out.inner_residual <= 1e-7,
                 "multiplication preserves the inner product");
  return out;
}

MonoidalL2 monoidal_structure_L2(FusionContext& fc, const AlgebraicBimodule& k,
                                 const AlgebraicBimodule& h) {
  const StandardForm& sf = fc.sf();
  MonoidalL2 out;
  out.tensor = relative_tensor(k, h);
  if (!out.tensor.product.has_inner())
    throw InputError("completion needs inner products on both operands");
  out.pack = functor_L2_pack(sf, out.tensor.product);
  out.left_pack = functor_L2_pack(sf, k);
  out.right_pack = functor_L2_pack(sf, h);
  out.fused = fc.fuse(out.left_pack.image, out.right_pack.image);

  CounitIso cu = counit_iso(fc, out.left_pack);
  const int dk = k.dim;
  const int dh = h.dim;
  const int dl = sf.dim();
  const Eigen::Index ncols = static_cast<Eigen::Index>(dk) * dh * dl;
  Mat p1(out.pack.q.rows(), ncols);
  Mat tpre(out.fused.rank(), ncols);
  for (int i = 0; i < dk; ++i) {
    Vec ci = out.fused.dh.hom.coeffs(cu.columns[i]);
    for (int j = 0; j < dh; ++j) {
      Vec tij = out.tensor.section.adjoint() *
                kron_vec(basis_vec(dk, i), basis_vec(dh, j));
      for (int x = 0; x < dl; ++x) {
        const Eigen::Index col =
            (static_cast<Eigen::Index>(i) * dh + j) * dl + x;
        p1.col(col) = out.pack.q * kron_vec(tij, basis_vec(dl, x));
        tpre.col(col) =
            out.fused.quotient_map *
            kron_vec(ci, out.right_pack.q *
                             kron_vec(basis_vec(dh, j), basis_vec(dl, x)));
      }
    }
  }
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(p1.transpose());
  out.matrix = cod.solve(tpre.transpose()).transpose();
  internal_check(
      (out.matrix * p1 - tpre).norm() <= 1e-7 * std::max(1.0, tpre.norm()),
      "defining relation has an exact solution");
  out.unitary_residual = std::max(
      (out.matrix * out.matrix.adjoint() - eye(out.matrix.rows())).norm(),
      (out.matrix.adjoint() * out.matrix - eye(out.matrix.cols())).norm());
  internal_check(out.unitary_residual <= 1e-8, "carrier map is unitary");
  require_intertwiner(out.pack.image, out.fused.carrier, out.matrix,
                      MorphKind::bimodule, 1e-7);
  return out;
}

ConjugacyPreservation conjugacy_preservation(FusionContext& fc,
                                             const HilbertBimodule& h) {
  const StandardForm& sf = fc.sf();
  ConjugacyPreservation out;
  out.dd = duality_data(fc, h);
  DualityData ddb = duality_data(fc, out.dd.dual);
  out.exchange = bounded_left_right_iso(fc, out.dd.dual, ddb);

  const BoundedVectorSpace& d = fc.bounded(h);
  Mat jc = sf.Jmat().conjugate();
  Eigen::PartialPivLU<Mat> lu(out.exchange.matrix);
  Mat cp(out.exchange.from.dim(), d.dim());
  for (int j = 0; j < d.dim(); ++j) {
    Mat y = d.hom.basis[j].conjugate() * jc;
    Vec c = out.exchange.to.coeffs(y);
    internal_check((out.exchange.to.materialize(c) - y).norm() <=
                       1e-8 * std::max(1.0, y.norm()),
                   "dagger lands in the left bounded vectors");
    cp.col(j) = lu.solve(c);
  }
  out.matrix = std::move(cp);
  internal_check(out.matrix.rows() == out.matrix.cols() &&
                     matrix_rank(out.matrix) == d.dim(),
                 "exchange is invertible");
  AlgebraicBimodule da = bounded_as_algebraic(d);
  AlgebraicBimodule dab = bounded_as_algebraic(fc.bounded(out.dd.dual));
  require_intertwiner(conjugate(actions_of(da)), actions_of(dab), out.matrix,
                      MorphKind::bimodule, 1e-7);
  return out;
}

CheckReport check_equivalence(FusionContext& fc,
                              const std::vector<HilbertBimodule>& fixtures) {
  CheckReport rep;
  const StandardForm& sf = fc.sf();
  const Algebra& alg = sf.algebra();
  Rng rng(97);

  auto random_endo = [&](const HilbertBimodule& h) {
    std::vector<Mat> basis = hom_both(h, h);
    Mat f = zeros(h.dim, h.dim);
    for (const Mat& e : basis) f += Cx(rng.normal(), rng.normal()) * e;
    return f;
  };

  for (std::size_t n = 0; n < fixtures.size(); ++n) {
    const HilbertBimodule& h = fixtures[n];
    alg.require_same(h.alg);
    const std::string tag = "fixture " + std::to_string(n) + ": ";

    UnitIso u = unit_iso(fc, h);
    rep.add(tag + "unit is unitary", u.unitary_residual, 1e-10);
    rep.add(tag + "unit intertwines the actions", u.intertwine_residual,
            1e-10);

    CounitIso cu = counit_iso(fc, u.pack);
    rep.add(tag + "counit preserves inner products", cu.inner_residual, 1e-9);
    rep.add(tag + "counit adjoint formula", cu.adjoint_residual, 1e-9);

    double nat_u = 0.0;
    double nat_c = 0.0;
    for (int t = 0; t < 2; ++t) {
      Mat f = random_endo(h);
      Mat df = d_morphism(fc, h, h, f);
      Mat l2df = functor_L2_map(u.pack, u.pack, df);
      nat_u = std::max(
          nat_u, rel((f * u.matrix - u.matrix * l2df).norm(), f.norm()));
      Mat dl2df = d_morphism(fc, u.pack.image, u.pack.image, l2df);
      nat_c = std::max(nat_c, rel((dl2df * cu.matrix - cu.matrix * df).norm(),
                                  df.norm()));
    }
    rep.add(tag + "unit is natural", nat_u, 1e-10);
    rep.add(tag + "counit is natural", nat_c, 1e-10);

    // Triangle identities for the adjunction.
    UnitIso ub = unit_iso(fc, u.pack.image);
    Mat l2t = functor_L2_map(u.pack, ub.pack, cu.matrix);
    rep.add(tag + "triangle on the completion",
            (ub.matrix * l2t - eye(u.pack.image.dim)).norm(), 1e-9);
    Mat du = d_morphism(fc, u.pack.image, h, u.matrix);
    rep.add(tag + "triangle on the bounded vectors",
            (du * cu.matrix - eye(cu.pack.source.dim)).norm(), 1e-9);

    // Multiplying by L2 on the left is the left unitor.
    MonoidalD mul = monoidal_structure_D(fc, fc.l2(), h);
    Mat lam = left_unitor(fc, h);
    const FusionResult& ful = fc.fuse(fc.l2(), h);
    const BoundedVectorSpace& zf = fc.bounded(ful.carrier);
    const BoundedVectorSpace& dh = fc.bounded(h);
    const BoundedVectorSpace& dl2 = fc.bounded(fc.l2());
    Mat dlam(dh.dim(), zf.dim());
    for (int b = 0; b < zf.dim(); ++b)
      dlam.col(b) = dh.hom.coeffs(lam * zf.hom.basis[b]);
    Mat route_a = dlam * mul.matrix;
    AlgebraicBimodule ha = bounded_as_algebraic(dh);
    Mat lampre(ha.dim, static_cast<Eigen::Index>(dl2.dim()) * ha.dim);
    for (int i = 0; i < dl2.dim(); ++i)
      lampre.middleCols(static_cast<Eigen::Index>(i) * ha.dim, ha.dim) =
          ha.lact(alpha(sf, dl2.hom.basis[i]));
    Mat route_b = lampre * mul.tensor.section;
    rep.add(tag + "multiplication respects the left unitor",
            rel((route_a - route_b).norm(), route_a.norm()), 1e-9);

    // Conjugacy and duality preservation.
    ConjugacyPreservation cp = conjugacy_preservation(fc, h);
    auto [z1, z2] = zigzag_maps(fc, cp.dd);
    rep.add(tag + "zigzags close",
            std::max((z1 - eye(h.dim)).norm(),
                     (z2 - eye(cp.dd.dual.dim)).norm()),
            1e-9);
    rep.add(tag + "conjugate exchange intertwines",
            intertwining_residual(conjugate(actions_of(bounded_as_algebraic(
                                      fc.bounded(h)))),
                                  actions_of(bounded_as_algebraic(
                                      fc.bounded(cp.dd.dual))),
                                  cp.matrix, MorphKind::bimodule),
            1e-9);

    const AlgebraicBimodule a = bounded_as_algebraic(fc.bounded(h));
    const AlgebraicBimodule ab = bounded_as_algebraic(fc.bounded(cp.dd.dual));
    const int da = a.dim;
    const int dab = ab.dim;
    const FusionResult& fhhb = fc.fuse(h, cp.dd.dual);
    const BoundedVectorSpace& zhhb = fc.bounded(fhhb.carrier);
    Mat cmu = mu_matrix(fc, fhhb, zhhb.hom);
    auto pairing = [&](const Vec& x, const Vec& y) {
      Mat b = zhhb.hom.materialize(cmu * kron_vec(x, y));
      return alpha(sf, cp.dd.eta * b);
    };

    double pair_res = 0.0;
    double pair_scale = 1.0;
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < da; ++j) {
        Vec expect(alg.dim());
        for (int u = 0; u < alg.dim(); ++u) expect(u) = a.w[u](i, j);
        AlgElem g = pairing(basis_vec(da, i), cp.matrix.col(j));
        pair_res = std::max(pair_res, (alg.coords(g) - expect).norm());
        pair_scale = std::max(pair_scale, expect.norm());
      }
    rep.add(tag + "pairing through the duality matches the inner product",
            pair_res / pair_scale, 1e-9);

    // Zigzags transported through the functor close on the algebraic side.
    AlgebraicTensor tba = relative_tensor(ab, a);
    const FusionResult& fhbh = fc.fuse(cp.dd.dual, h);
    const BoundedVectorSpace& zhbh = fc.bounded(fhbh.carrier);
    Mat mub = mu_matrix(fc, fhbh, zhbh.hom) * tba.section;
    Vec e0 = zhbh.hom.coeffs(cp.dd.eps);
    internal_check((zhbh.hom.materialize(e0) - cp.dd.eps).norm() <=
                       1e-8 * std::max(1.0, cp.dd.eps.norm()),
                   "counit of the duality is a bounded vector");
    Vec v0 = mub.partialPivLu().solve(e0);
    internal_check((mub * v0 - e0).norm() <= 1e-7 * std::max(1.0, e0.norm()),
                   "counit lifts through the multiplication");
    Vec w0 = tba.section * v0;

    Mat zt = zeros(da, da);
    for (int x = 0; x < da; ++x) {
      Vec acc = Vec::Zero(da);
      for (int jb = 0; jb < dab; ++jb) {
        Mat lm = a.lact(pairing(basis_vec(da, x), basis_vec(dab, jb)));
        for (int i = 0; i < da; ++i)
          acc += w0(static_cast<Eigen::Index>(jb) * da + i) * lm.col(i);
      }
      zt.col(x) = acc;
    }
    Mat ztd = zeros(dab, dab);
    for (int y = 0; y < dab; ++y) {
      Vec acc = Vec::Zero(dab);
      for (int i = 0; i < da; ++i) {
        Mat rm = ab.ract(pairing(basis_vec(da, i), basis_vec(dab, y)));
        for (int jb = 0; jb < dab; ++jb)
          acc += w0(static_cast<Eigen::Index>(jb) * da + i) * rm.col(jb);
      }
      ztd.col(y) = acc;
    }
    rep.add(tag + "transported zigzags close",
            std::max((zt - eye(da)).norm(), (ztd - eye(dab)).norm()), 1e-9);
  }

  for (std::size_t n = 0; n + 1 < fixtures.size(); ++n) {
    const HilbertBimodule& k = fixtures[n];
    const HilbertBimodule& h = fixtures[n + 1];
    const std::string tag = "pair " + std::to_string(n) + ": ";

    MonoidalD mu = monoidal_structure_D(fc, k, h);
    rep.add(tag + "multiplication preserves inner products",
            mu.inner_residual, 1e-9);

    MultiplicityTable th = multiplicity_table(fc.fuse(k, h).carrier);
    bool tables_ok = th.remainder == 0;
    for (int kk = 0; kk < alg.nblocks(); ++kk)
      for (int ll = 0; ll < alg.nblocks(); ++ll) {
        Mat pz = mu.tensor.product.lact(alg.central_projection(kk)) *
                 mu.tensor.product.ract(alg.central_projection(ll));
        const int r = matrix_rank(pz);
        const int nn = alg.block_size(kk) * alg.block_size(ll);
        if (r % nn != 0 || r / nn != th.counts[kk][ll]) tables_ok = false;
      }
    rep.add_flag(tag + "fusion tables agree on both sides", tables_ok);

    AlgebraicBimodule ak = bounded_as_algebraic(fc.bounded(k));
    AlgebraicBimodule ah = bounded_as_algebraic(fc.bounded(h));
    MonoidalL2 ml = monoidal_structure_L2(fc, ak, ah);
    rep.add(tag + "completion multiplication is unitary", ml.unitary_residual,
            1e-9);

    UnitIso uk = unit_iso(fc, k);
    UnitIso uh = unit_iso(fc, h);
    Mat fu = fuse_morphism(fc, ml.fused, fc.fuse(k, h), uk.matrix, uh.matrix);
    UnitIso ufused = unit_iso(fc, fc.fuse(k, h).carrier);
    Mat l2mu = functor_L2_map(ml.pack, ufused.pack, mu.matrix);
    rep.add(tag + "carrier map matches the transported multiplication",
            (fu * ml.matrix - ufused.matrix * l2mu).norm(), 1e-9);
  }

  for (std::size_t n = 0; n + 2 < fixtures.size(); ++n) {
    const HilbertBimodule& k = fixtures[n];
    const HilbertBimodule& h = fixtures[n + 1];
    const HilbertBimodule& l = fixtures[n + 2];
    const std::string tag = "triple " + std::to_string(n) + ": ";

    AlgebraicBimodule a1 = bounded_as_algebraic(fc.bounded(k));
    AlgebraicBimodule a2 = bounded_as_algebraic(fc.bounded(h));
    AlgebraicBimodule a3 = bounded_as_algebraic(fc.bounded(l));
    AlgebraicTensor t12 = relative_tensor(a1, a2);
    AlgebraicTensor t23 = relative_tensor(a2, a3);
    AlgebraicTensor t123l = relative_tensor(t12.product, a3);
    AlgebraicTensor t123r = relative_tensor(a1, t23.product);
    Mat assoc_alg = algebraic_associator(t12, t123l, t23, t123r);

    MonoidalD mu12 = monoidal_structure_D(fc, k, h);
    MonoidalD mu23 = monoidal_structure_D(fc, h, l);
    const FusionResult& f12 = fc.fuse(k, h);
    const FusionResult& f23 = fc.fuse(h, l);
    MonoidalD mu12_3 = monoidal_structure_D(fc, f12.carrier, l);
    MonoidalD mu1_23 = monoidal_structure_D(fc, k, f23.carrier);

    Mat m1 = mu12_3.tensor.section.adjoint() *
             kron(mu12.matrix, eye(a3.dim)) * t123l.section;
    Mat m2 = mu1_23.tensor.section.adjoint() *
             kron(eye(a1.dim), mu23.matrix) * t123r.section;

    Mat ah_assoc = associator(fc, k, h, l);
    const BoundedVectorSpace& zl = fc.bounded(fc.fuse(f12.carrier, l).carrier);
    const BoundedVectorSpace& zr = fc.bounded(fc.fuse(k, f23.carrier).carrier);
    Mat da_mat(zr.dim(), zl.dim());
    for (int b = 0; b < zl.dim(); ++b) {
      Mat img = ah_assoc * zl.hom.basis[b];
      Vec c = zr.hom.coeffs(img);
      internal_check((zr.hom.materialize(c) - img).norm() <=
                         1e-8 * std::max(1.0, img.norm()),
                     "associator transports bounded vectors");
      da_mat.col(b) = c;
    }
    Mat route1 = da_mat * mu12_3.matrix * m1;
    Mat route2 = mu1_23.matrix * m2 * assoc_alg;
    rep.add(tag + "multiplication intertwines the associators",
            rel((route1 - route2).norm(), route1.norm()), 1e-9);
  }

  return rep;
}

}  // namespace fusionlab

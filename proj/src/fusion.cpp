#include "fusionlab/fusion.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "fusionlab/errors.hpp"
#include "fusionlab/numeric.hpp"
#include "fusionlab/random.hpp"

namespace fusionlab {

namespace {

void internal_check(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("internal check failed: ") + what);
}

void append_bytes(std::string& key, const Mat& m) {
  const char* p = reinterpret_cast<const char*>(m.data());
  key.append(p, sizeof(Cx) * static_cast<std::size_t>(m.size()));
}

// q * kron(c, I_w) without materializing the Kronecker factor.
Mat quot_kron_right(const Mat& q, const Mat& c, int w) {
  Mat out = zeros(q.rows(), c.cols() * w);
  for (int j = 0; j < c.cols(); ++j)
    for (int z = 0; z < c.rows(); ++z)
      out.middleCols(j * w, w) += c(z, j) * q.middleCols(z * w, w);
  return out;
}

// q * kron(p, b), assembled per p-column to keep temporaries small.
Mat quot_kron_left(const Mat& q, const Mat& p, const Mat& b) {
  const int w = static_cast<int>(b.rows());
  Mat out(q.rows(), p.cols() * b.cols());
  Mat qp(q.rows(), w);
  for (int i = 0; i < p.cols(); ++i) {
    qp.setZero();
    for (int ip = 0; ip < p.rows(); ++ip)
      qp += p(ip, i) * q.middleCols(ip * w, w);
    out.middleCols(i * b.cols(), b.cols()) = qp * b;
  }
  return out;
}

}  // namespace

std::string bimodule_key(const HilbertBimodule& h) {
  std::string key;
  for (int s : h.alg.block_sizes()) key += std::to_string(s) + ",";
  key += ";" + std::to_string(h.dim) + ";";
  for (const Mat& m : h.L) append_bytes(key, m);
  for (const Mat& m : h.R) append_bytes(key, m);
  return key;
}

const BoundedVectorSpace& FusionContext::bounded(const HilbertBimodule& h) {
  std::string key = bimodule_key(h);
  auto it = bounded_.find(key);
  if (it == bounded_.end())
    it = bounded_
             .emplace(std::move(key), std::make_unique<BoundedVectorSpace>(
                                          bounded_vectors(sf_, h)))
             .first;
  return *it->second;
}

const LeftBoundedData& FusionContext::left_bounded(const HilbertBimodule& k) {
  std::string key = bimodule_key(k);
  auto it = lefts_.find(key);
  if (it == lefts_.end()) {
    auto data = std::make_unique<LeftBoundedData>();
    data->hom = hom_space(sf_.l2(), k, Side::left_module_maps);
    const int t = data->hom.dim();
    data->mprime.assign(t, {});
    for (int a = 0; a < t; ++a)
      for (int b = 0; b < t; ++b)
        data->mprime[a].push_back(alpha_prime(
            sf_, adjoint_morphism(data->hom.basis[b]) * data->hom.basis[a]));
    data->eval = Mat(k.dim, t);
    for (int a = 0; a < t; ++a)
      data->eval.col(a) = data->hom.basis[a] * sf_.omega();
    it = lefts_.emplace(std::move(key), std::move(data)).first;
  }
  return *it->second;
}

const FusionResult& FusionContext::fuse(const HilbertBimodule& h,
                                        const HilbertBimodule& k) {
  sf_.algebra().require_same(h.alg);
  sf_.algebra().require_same(k.alg);
  std::string key = bimodule_key(h) + "|" + bimodule_key(k);
  auto it = fusions_.find(key);
  if (it != fusions_.end()) return *it->second;

  auto res = std::make_unique<FusionResult>();
  res->dh = bounded(h);
  res->right_operand = k;
  const BoundedVectorSpace& d = res->dh;
  const int r = d.dim();
  const int dk = k.dim;
  const int pre = r * dk;

  // <x_i (x) e_a, x_j (x) e_b> = entry (b,a) of lact_K((x_i, x_j)_M)
  res->gram_cs = zeros(pre, pre);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      Mat lk = k.lact(d.minner[i][j]);
      for (int a = 0; a < dk; ++a)
        for (int b = 0; b < dk; ++b)
          res->gram_cs(j * dk + b, i * dk + a) = lk(b, a);
    }
  res->gram_cs = hermitize(res->gram_cs);

  int m = 0;
  if (pre > 0) {
    auto [w, v] = hermitian_eig(res->gram_cs);
    double wmax = std::max(w(0), 0.0);
    internal_check(w(pre - 1) > -1e-8 * std::max(wmax, 1.0),
                   "fusion Gram positive");
    // absolute floor keeps modules whose Gram is numerical noise empty
    double cut = 1e-11 * std::max(wmax, 1.0);
    while (m < pre && w(m) > cut) ++m;
    RVec sq = w.head(m).array().sqrt();
    res->quotient_map = sq.cast<Cx>().asDiagonal() * v.leftCols(m).adjoint();
    res->section = v.leftCols(m) * sq.cwiseInverse().cast<Cx>().asDiagonal();
    res->null_basis = v.rightCols(pre - m);
  } else {
    res->quotient_map = zeros(0, 0);
    res->section = zeros(0, 0);
    res->null_basis = zeros(0, 0);
  }

  // module actions descend from the pre-space
  std::vector<Mat> ls, rs;
  for (int u = 0; u < sf_.algebra().dim(); ++u) {
    Mat a = kron(d.hom.L[u], eye(dk));
    Mat b = kron(eye(r), k.runit(u));
    internal_check((res->quotient_map * a * res->null_basis).norm() <
                       1e-8 * std::max(1.0, a.norm()),
                   "left action descends");
    internal_check((res->quotient_map * b * res->null_basis).norm() <
                       1e-8 * std::max(1.0, b.norm()),
                   "right action descends");
    ls.push_back(res->quotient_map * a * res->section);
    rs.push_back(res->quotient_map * b * res->section);
  }
  res->carrier = make_bimodule(sf_.algebra(), ls, rs);
  if (m > 0)
    internal_check((res->quotient_map * res->section - eye(m)).norm() < 1e-10,
                   "section is a right inverse");

  // bounded-pairs picture: x (x) y -> x (x) y(Omega); the pullback of the
  // carrier inner product is the state-pairing Gram on pairs
  const BoundedVectorSpace& dkspace = bounded(k);
  const int s = dkspace.dim();
  Mat ev = eval_at_omega(sf_, dkspace);
  res->iso_from_bounded_pairs = res->quotient_map * kron(eye(r), ev);
  Mat gram_pairs = zeros(r * s, r * s);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      gram_pairs.block(j * s, i * s, s, s) =
          ev.adjoint() * k.lact(d.minner[i][j]) * ev;
  internal_check(
      (res->iso_from_bounded_pairs.adjoint() * res->iso_from_bounded_pairs -
       gram_pairs)
              .norm() < 1e-10 * std::max(1.0, gram_pairs.norm()),
      "bounded-pairs pullback Gram");

  // two sampled pairings through the literal formula phi((y2,(x1,x2)|>y1))
  if (r > 0 && s > 0) {
    Rng rng(81);
    for (int trial = 0; trial < 2; ++trial) {
      Vec xc1 = gaussian_matrix(rng, r, 1).col(0);
      Vec xc2 = gaussian_matrix(rng, r, 1).col(0);
      Vec yc1 = gaussian_matrix(rng, s, 1).col(0);
      Vec yc2 = gaussian_matrix(rng, s, 1).col(0);
      Mat x1 = d.hom.materialize(xc1), x2 = d.hom.materialize(xc2);
      Mat y1 = dkspace.hom.materialize(yc1);
      Mat y2 = dkspace.hom.materialize(yc2);
      AlgElem mid = alpha(sf_, adjoint_morphism(x2) * x1);
      Cx lit = state_eval(sf_.algebra(), sf_.state(),
                          alpha(sf_, adjoint_morphism(y2) * k.lact(mid) * y1));
      Vec c1 = res->iso_from_bounded_pairs * kron(xc1, yc1);
      Vec c2 = res->iso_from_bounded_pairs * kron(xc2, yc2);
      double scale = std::max({1.0, std::abs(lit), c1.norm() * c2.norm()});
      internal_check(std::abs(lit - c2.dot(c1)) < 1e-10 * scale,
                     "state pairing matches the carrier");
    }
  }

  // four-point picture over left-module maps L2 -> K
  const LeftBoundedData& lb = left_bounded(k);
  const int t = lb.hom.dim();
  res->iso_from_fourpoint = res->quotient_map * kron(eye(r), lb.eval);
  Mat gram_fp = zeros(r * t, r * t);
  std::vector<std::vector<Vec>> wv(t);
  for (int a = 0; a < t; ++a)
    for (int b = 0; b < t; ++b)
      wv[a].push_back(sf_.ract(lb.mprime[a][b]) * sf_.omega());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      Vec hv = sf_.hat(d.minner[j][i]);
      for (int a = 0; a < t; ++a)
        for (int b = 0; b < t; ++b)
          gram_fp(j * t + b, i * t + a) = hv.dot(wv[a][b]);
    }
  internal_check(
      (res->iso_from_fourpoint.adjoint() * res->iso_from_fourpoint - gram_fp)
              .norm() < 1e-10 * std::max(1.0, gram_fp.norm()),
      "four-point pullback Gram");
  if (m > 0)
    internal_check(matrix_rank(res->iso_from_fourpoint) == m,
                   "four-point image dense");

  it = fusions_.emplace(std::move(key), std::move(res)).first;
  return *it->second;
}

Mat left_unitor(FusionContext& fc, const HilbertBimodule& h) {
  const FusionResult& fus = fc.fuse(fc.l2(), h);
  const int r = fus.dh.dim();
  Mat pre = zeros(h.dim, r * h.dim);
  for (int i = 0; i < r; ++i)
    pre.middleCols(i * h.dim, h.dim) =
        h.lact(alpha(fc.sf(), fus.dh.hom.basis[i]));
  Mat u = pre * fus.section;
  internal_check((u.adjoint() * u - eye(u.cols())).norm() < 1e-9 &&
                     (u * u.adjoint() - eye(u.rows())).norm() < 1e-9,
                 "left unitor unitary");
  require_intertwiner(fus.carrier, h, u, MorphKind::bimodule);
  return u;
}

Mat right_unitor(FusionContext& fc, const HilbertBimodule& h) {
  const FusionResult& fus = fc.fuse(h, fc.l2());
  const int r = fus.dh.dim();
  const int d = fc.sf().dim();
  Mat pre = zeros(h.dim, r * d);
  for (int i = 0; i < r; ++i) pre.middleCols(i * d, d) = fus.dh.hom.basis[i];
  Mat u = pre * fus.section;
  internal_check((u.adjoint() * u - eye(u.cols())).norm() < 1e-9 &&
                     (u * u.adjoint() - eye(u.rows())).norm() < 1e-9,
                 "right unitor unitary");
  require_intertwiner(fus.carrier, h, u, MorphKind::bimodule);
  return u;
}

Mat fuse_morphism(FusionContext&, const FusionResult& from,
                  const FusionResult& to, const Mat& f, const Mat& g,
                  double tol) {
  const int rf = from.dh.dim();
  Mat df(to.dh.dim(), rf);
  for (int j = 0; j < rf; ++j)
    df.col(j) = to.dh.hom.coeffs(f * from.dh.hom.basis[j]);
  Mat a = kron(df, g);
  if ((to.quotient_map * a * from.null_basis).norm() >
      tol * std::max(1.0, a.norm()))
    throw NotIntertwiner("fused morphism does not descend to the carrier");
  return to.quotient_map * a * from.section;
}

Mat mu_matrix(FusionContext& fc, const FusionResult& fus, const HomSpace& z) {
  const BoundedVectorSpace& dk = fc.bounded(fus.right_operand);
  const int r = fus.dh.dim();
  const int s = dk.dim();
  const int dkdim = fus.right_operand.dim;
  Mat c(z.dim(), r * s);
  Mat e = zeros(r * dkdim, fc.sf().dim());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < s; ++j) {
      e.setZero();
      e.middleRows(i * dkdim, dkdim) = dk.hom.basis[j];
      c.col(i * s + j) = z.coeffs(fus.quotient_map * e);
    }
  return c;
}

Mat associator(FusionContext& fc, const HilbertBimodule& h,
               const HilbertBimodule& k, const HilbertBimodule& l) {
  const FusionResult& fus_hk = fc.fuse(h, k);
  const FusionResult& fus_kl = fc.fuse(k, l);
  const FusionResult& fus_hk_l = fc.fuse(fus_hk.carrier, l);
  const FusionResult& fus_h_kl = fc.fuse(h, fus_kl.carrier);
  internal_check(fus_hk_l.rank() == fus_h_kl.rank(),
                 "the two association orders agree in dimension");

  // both routes out of the D(H) (x) D(K) (x) L coordinate space
  Mat c = mu_matrix(fc, fus_hk, fus_hk_l.dh.hom);
  Mat psi = quot_kron_right(fus_hk_l.quotient_map, c, l.dim);

  const int r = fus_hk.dh.dim();
  Mat p(fus_h_kl.dh.dim(), r);  // D(H) basis alignment; identity when cached
  for (int j = 0; j < r; ++j)
    p.col(j) = fus_h_kl.dh.hom.coeffs(fus_hk.dh.hom.basis[j]);
  Mat phir = quot_kron_left(fus_h_kl.quotient_map, p, fus_kl.quotient_map);

  Eigen::JacobiSVD<Mat> svd(psi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  int keep = 0;
  while (keep < sv.size() && sv(keep) > 1e-10 * sv(0)) ++keep;
  internal_check(keep == fus_hk_l.rank(), "triple tensors span the carrier");
  Mat pinv = svd.matrixV().leftCols(keep) *
             sv.head(keep).cwiseInverse().cast<Cx>().asDiagonal() *
             svd.matrixU().leftCols(keep).adjoint();
  Mat a = phir * pinv;
  internal_check((phir - a * psi).norm() < 1e-8 * std::max(1.0, phir.norm()),
                 "rebracketing factors through the quotient");
  internal_check((a.adjoint() * a - eye(a.cols())).norm() < 1e-8,
                 "associator unitary");
  require_intertwiner(fus_hk_l.carrier, fus_h_kl.carrier, a,
                      MorphKind::bimodule);
  return a;
}

double triangle_defect(FusionContext& fc, const HilbertBimodule& h,
                       const HilbertBimodule& k) {
  const HilbertBimodule& l2 = fc.l2();
  const FusionResult& fus_hl2 = fc.fuse(h, l2);
  const FusionResult& fus_l2k = fc.fuse(l2, k);
  Mat a = associator(fc, h, l2, k);
  Mat lam = left_unitor(fc, k);
  Mat rho = right_unitor(fc, h);
  const FusionResult& fus_hk = fc.fuse(h, k);
  Mat f_lam = fuse_morphism(fc, fc.fuse(h, fus_l2k.carrier), fus_hk,
                            eye(h.dim), lam);
  Mat f_rho = fuse_morphism(fc, fc.fuse(fus_hl2.carrier, k), fus_hk, rho,
                            eye(k.dim));
  return (f_lam * a - f_rho).norm();
}

double pentagon_defect(FusionContext& fc, const HilbertBimodule& h,
                       const HilbertBimodule& k, const HilbertBimodule& l,
                       const HilbertBimodule& p) {
  const HilbertBimodule& hk = fc.fuse(h, k).carrier;
  const HilbertBimodule& kl = fc.fuse(k, l).carrier;
  const HilbertBimodule& lp = fc.fuse(l, p).carrier;
  const HilbertBimodule& hkl_left = fc.fuse(hk, l).carrier;
  const HilbertBimodule& hkl_right = fc.fuse(h, kl).carrier;

  Mat a_hkl = associator(fc, h, k, l);
  Mat a_klp = associator(fc, k, l, p);

  // ((HK)L)P -> (HK)(LP) -> H(K(LP))
  Mat route1 = associator(fc, h, k, lp) * associator(fc, hk, l, p);

  // ((HK)L)P -> (H(KL))P -> H((KL)P) -> H(K(LP))
  Mat f1 = fuse_morphism(fc, fc.fuse(hkl_left, p), fc.fuse(hkl_right, p),
                         a_hkl, eye(p.dim));
  Mat a3 = associator(fc, h, kl, p);
  Mat f2 =
      fuse_morphism(fc, fc.fuse(h, fc.fuse(kl, p).carrier),
                    fc.fuse(h, fc.fuse(k, lp).carrier), eye(h.dim), a_klp);
  return (route1 - f2 * a3 * f1).norm();
}

DistributivityReport distributivity_check(FusionContext& fc,
                                          const HilbertBimodule& h,
                                          const HilbertBimodule& k,
                                          const HilbertBimodule& l) {
  DistributivityReport out;

  DirectSum hk = direct_sum(h, k);
  const FusionResult& fus_sum_l = fc.fuse(hk.sum, l);
  Mat f1 = fuse_morphism(fc, fc.fuse(h, l), fus_sum_l, hk.inj1, eye(l.dim));
  Mat f2 = fuse_morphism(fc, fc.fuse(k, l), fus_sum_l, hk.inj2, eye(l.dim));
  Mat f(f1.rows(), f1.cols() + f2.cols());
  f << f1, f2;
  out.left_unitary = f;
  out.report.add_flag("left distributivity dimensions", f.rows() == f.cols());
  out.report.add("left distributivity unitary",
                 std::max((f.adjoint() * f - eye(f.cols())).norm(),
                          (f * f.adjoint() - eye(f.rows())).norm()),
                 1e-10);

  DirectSum kl = direct_sum(k, l);
  const FusionResult& fus_h_sum = fc.fuse(h, kl.sum);
  Mat g1 = fuse_morphism(fc, fc.fuse(h, k), fus_h_sum, eye(h.dim), kl.inj1);
  Mat g2 = fuse_morphism(fc, fc.fuse(h, l), fus_h_sum, eye(h.dim), kl.inj2);
  Mat g(g1.rows(), g1.cols() + g2.cols());
  g << g1, g2;
  out.right_unitary = g;
  out.report.add_flag("right distributivity dimensions", g.rows() == g.cols());
  out.report.add("right distributivity unitary",
                 std::max((g.adjoint() * g - eye(g.cols())).norm(),
                          (g * g.adjoint() - eye(g.rows())).norm()),
                 1e-10);
  return out;
}

}  // namespace fusionlab

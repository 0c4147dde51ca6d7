#include "fca/isometry.hpp"

#include <algorithm>
#include <map>

namespace fca {

namespace {

int basis_parity(int64_t b) { return std::popcount(uint64_t(b)) & 1; }

// Deterministic ordering inside a parity sector: by the position of the first
// significant amplitude, then by the next ones.
bool lex_before(const DenseVec& a, const DenseVec& b) {
  for (Eigen::Index i = 0; i < a.size(); i++) {
    double da = std::abs(a(i)), db = std::abs(b(i));
    if (std::abs(da - db) > 1e-9) return da > db ? true : false;
  }
  return false;
}

void fix_phase(DenseVec& v) {
  Eigen::Index lead = 0;
  double best = -1;
  for (Eigen::Index i = 0; i < v.size(); i++) {
    if (std::abs(v(i)) > best + 1e-12) {
      best = std::abs(v(i));
      lead = i;
    }
  }
  if (best > 0) v *= std::conj(v(lead)) / std::abs(v(lead));
}

}  // namespace

Isometry build_isometry(const TileProjection& p) {
  Dense pd = to_dense(p.p, p.tile);
  int64_t d = p.tile.dim();

  Isometry iso;
  iso.tile = p.tile;
  iso.rank = p.rank;
  iso.w = Dense::Zero(d, p.rank);

  int col = 0;
  for (int parity = 0; parity < 2; parity++) {
    std::vector<int64_t> sector;
    for (int64_t b = 0; b < d; b++)
      if (basis_parity(b) == parity) sector.push_back(b);
    Dense blk(sector.size(), sector.size());
    for (size_t i = 0; i < sector.size(); i++)
      for (size_t j = 0; j < sector.size(); j++) blk(Eigen::Index(i), Eigen::Index(j)) = pd(sector[i], sector[j]);
    Eigen::SelfAdjointEigenSolver<Dense> es(blk);
    std::vector<DenseVec> vecs;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); k++) {
      if (es.eigenvalues()(k) > 0.5) {
        DenseVec v = DenseVec::Zero(d);
        for (size_t i = 0; i < sector.size(); i++) v(sector[i]) = es.eigenvectors()(Eigen::Index(i), k);
        fix_phase(v);
        vecs.push_back(v);
      }
    }
    std::sort(vecs.begin(), vecs.end(), lex_before);
    for (auto& v : vecs) {
      if (col >= p.rank) throw std::runtime_error("projection rank mismatch in isometry build");
      iso.w.col(col++) = v;
      iso.parities.push_back(parity);
      if (parity == 0) iso.even_count++;
    }
  }
  if (col != p.rank) throw std::runtime_error("projection rank mismatch in isometry build");
  return iso;
}

Dense global_isometry(const Isometry& e, int tiles) {
  Dense w = e.w;
  for (int t = 1; t < tiles; t++) {
    Dense next(w.rows() * e.w.rows(), w.cols() * e.w.cols());
    for (Eigen::Index i = 0; i < w.rows(); i++)
      for (Eigen::Index j = 0; j < w.cols(); j++)
        next.block(i * e.w.rows(), j * e.w.cols(), e.w.rows(), e.w.cols()) = w(i, j) * e.w;
    w.swap(next);
  }
  return w;
}

Dense coisometry_apply(const Isometry& e, const Dense& fine, int tiles) {
  Dense w = global_isometry(e, tiles);
  if (fine.rows() != w.rows()) throw std::invalid_argument("coisometry: dimension mismatch");
  return w.adjoint() * fine * w;
}

Dense isometry_apply(const Isometry& e, const Dense& coarse, int tiles) {
  Dense w = global_isometry(e, tiles);
  if (coarse.rows() != w.cols()) throw std::invalid_argument("isometry: dimension mismatch");
  return w * coarse * w.adjoint();
}

}  // namespace fca

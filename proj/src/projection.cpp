#include "fca/projection.hpp"

#include <cmath>

#include "fca/literals.hpp"

namespace fca {

TileProjection make_tile_projection(const GradedOperator& p, int tile_cells, double tol) {
  CellLayout tile{tile_cells, 1};
  if (p.width() != tile.width())
    throw std::invalid_argument("projection width does not match the tile");
  if (!p.is_homogeneous() || p.parity() != 0)
    throw std::invalid_argument("tile projection must be even");
  if ((p - p.adjoint()).hs_norm() > tol)
    throw std::invalid_argument("tile projection must be hermitian");
  if ((op_mul(p, p) - p).hs_norm() > tol)
    throw std::invalid_argument("tile operator must be idempotent");
  double tr = p.tracial_state().real() * double(tile.dim());
  int rank = int(std::lround(tr));
  if (std::abs(tr - rank) > 1e-8 || rank <= 0)
    throw std::invalid_argument("projection rank is not a positive integer");
  return {tile, p, rank};
}

TileProjection named_projection(NamedProjection which, int c, int sign) {
  CellLayout lay{2, 1};
  GradedOperator id = GradedOperator::identity(lay.width());
  GradedOperator z0 = majorana_z(lay, 0), z1 = majorana_z(lay, 1);
  GradedOperator p(lay.width());
  switch (which) {
    case NamedProjection::Pe:
      p = 0.5 * (id + op_mul(z0, z1));
      break;
    case NamedProjection::Po:
      p = 0.5 * (id - op_mul(z0, z1));
      break;
    case NamedProjection::PL: {
      double s = (c == 0) ? 1.0 : -1.0;
      p = 0.5 * (id + s * z1);
      break;
    }
    case NamedProjection::PR: {
      double s = (c == 0) ? 1.0 : -1.0;
      p = 0.5 * (id + s * z0);
      break;
    }
    case NamedProjection::PiX:
      p = 0.5 * (id + cplx(0, double(sign)) * op_mul(majorana_x(lay, 0), majorana_x(lay, 1)));
      break;
    case NamedProjection::PiY:
      p = 0.5 * (id + cplx(0, double(sign)) * op_mul(majorana_y(lay, 0), majorana_y(lay, 1)));
      break;
  }
  return make_tile_projection(p, 2);
}

std::string projection_name(NamedProjection which, int c, int sign) {
  switch (which) {
    case NamedProjection::Pe:
      return "Pe";
    case NamedProjection::Po:
      return "Po";
    case NamedProjection::PL:
      return "PL" + std::to_string(c);
    case NamedProjection::PR:
      return "PR" + std::to_string(c);
    case NamedProjection::PiX:
      return sign > 0 ? "PiX+" : "PiX-";
    case NamedProjection::PiY:
      return sign > 0 ? "PiY+" : "PiY-";
  }
  return "?";
}

TileProjection parse_projection(const std::string& text) {
  if (text == "Pe") return named_projection(NamedProjection::Pe);
  if (text == "Po") return named_projection(NamedProjection::Po);
  if (text == "PL" || text == "PL0") return named_projection(NamedProjection::PL, 0);
  if (text == "PL1") return named_projection(NamedProjection::PL, 1);
  if (text == "PR" || text == "PR0") return named_projection(NamedProjection::PR, 0);
  if (text == "PR1") return named_projection(NamedProjection::PR, 1);
  if (text == "PiX" || text == "PiX+") return named_projection(NamedProjection::PiX, 0, +1);
  if (text == "PiX-") return named_projection(NamedProjection::PiX, 0, -1);
  if (text == "PiY" || text == "PiY+") return named_projection(NamedProjection::PiY, 0, +1);
  if (text == "PiY-") return named_projection(NamedProjection::PiY, 0, -1);
  GradedOperator p = parse_operator_literal(text, 2);
  return make_tile_projection(p, 2);
}

}  // namespace fca

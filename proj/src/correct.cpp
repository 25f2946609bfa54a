#include "faultflow/correct.hpp"

#include <stdexcept>

#include "faultflow/quadrature.hpp"

namespace faultflow {

MixedBc subdomain_bc(const Mesh& parent, const SubMesh& sub, const CgSolution& global) {
  MixedBc bc;
  const Mesh& s = sub.mesh;
  for (int F = 0; F < s.n_facets(); ++F) {
    const Facet& ft = s.facets[F];
    if (ft.tag != FacetTag::sub_flux && ft.tag != FacetTag::sub_dirichlet) continue;

    const int pcell = parent.facets[sub.parent_facet[F]].cells[0];
    const Vec2 a = s.verts[ft.verts[0]], b = s.verts[ft.verts[1]];
    double flux = 0.0, mean = 0.0;
    for (const auto& q : line_rule(3)) {
      const Vec2 x{(1.0 - q.t) * a.x + q.t * b.x, (1.0 - q.t) * a.y + q.t * b.y};
      if (ft.tag == FacetTag::sub_flux)
        flux += q.w * dot(eval_vector(global.u, pcell, x), ft.normal);
      else
        mean += q.w * eval_scalar(global.p, pcell, x);
    }
    if (ft.tag == FacetTag::sub_flux)
      bc.pinned_flux.emplace(F, flux * ft.measure);  // RT0 dof is the facet flux
    else
      bc.dirichlet_mean.emplace(F, mean);
  }
  return bc;
}

CompositeSolution solve_corrected(std::shared_ptr<const Mesh> parent,
                                  const FaultGeometry& fault, double eps,
                                  double eps_tau, const BcValues& bc,
                                  const GmresOptions& opt) {
  if (!parent) throw std::invalid_argument("solve_corrected: null mesh");
  if (parent->dim != 2)
    throw std::invalid_argument("solve_corrected: the correction is 2D-only");

  CompositeSolution out;
  out.parent = parent;
  out.eps = eps;
  out.tf = fault.tf;
  out.global = solve_cg(*parent, fault, eps, eps_tau, bc, opt);
  if (!out.global.report.converged) return out;

  out.sub = std::make_shared<SubMesh>(extract_subdomain(*parent));
  const Mesh& s = out.sub->mesh;

  MixedBc sbc = subdomain_bc(*parent, *out.sub, out.global);
  MixedSystem sys = assemble_mixed_system(s, fault.tf, /*f=*/{}, sbc);

  Ilu0 prec(sys.A);
  std::vector<double> x;
  out.sub_report = gmres(sys.A, sys.rhs, x, &prec, opt);

  out.sub_u = make_field(SpaceKind::RT0, s);
  out.sub_p = make_field(SpaceKind::P0, s);
  std::copy(x.begin(), x.begin() + sys.n_u, out.sub_u.values.begin());
  std::copy(x.begin() + sys.n_u, x.end(), out.sub_p.values.begin());
  // imposed fluxes hold exactly so the stitched normal velocity is continuous
  for (const auto& [F, flux] : sbc.pinned_flux) out.sub_u.values[F] = flux;
  return out;
}

}  // namespace faultflow

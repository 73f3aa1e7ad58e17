#pragma once

#include <array>
#include <string>
#include <vector>

#include "llgvm/grid.hpp"

namespace llgvm {

/// Yee fields on the periodic node grid. Component c of E sits on the edge
/// from node i to i + e_c (x + h_c/2 e_c); component c of B sits on the face
/// normal to e_c, offset by half a cell in the two other directions. Both are
/// stored in VectorField3 with the index of the lower node.
///
/// B is kept at integer time levels; step_fields splits the B update in two
/// half kicks around the E update, which is the usual leapfrog.
struct EMFieldPair {
  VectorField3 E;
  VectorField3 B;
  double eps_r = 1.0;
  double mu_r = 1.0;

  const PeriodicGrid& grid() const noexcept { return E.grid(); }
};

/// One transverse mode of the initial fields. The wave index n sets
/// k = 2 pi n / L; the polarization is unit and orthogonal to n. E gets
/// e_amp * curl_dual(psi) and B gets b_amp * curl(A) with psi, A = pol cos(k.x).
struct EMMode {
  std::array<int, 3> n{1, 0, 0};
  double e_amp = 0.0;
  double b_amp = 0.0;
};

/// Parses "nx ny nz e_amp b_amp; ..." (empty string: no modes). Throws
/// ConfigError on malformed entries.
std::vector<EMMode> parse_em_modes(const std::string& text);

// Staggered difference operators, exact adjoints of each other.
/// Edge field -> face field (forward differences).
VectorField3 curl_edge(const VectorField3& e);
/// Face field -> edge field (backward differences); equals curl_edge^T.
VectorField3 curl_face(const VectorField3& b);
/// Face field -> cell-centred scalar (forward differences).
ScalarField div_face(const VectorField3& b);
/// Edge field -> node scalar (backward differences).
ScalarField div_edge(const VectorField3& e);
/// Node scalar -> edge field (forward differences).
VectorField3 grad_node(const ScalarField& phi);

/// Node vector -> edges by two-point averaging along each component's axis.
VectorField3 nodes_to_edges(const VectorField3& f);
/// Edges -> nodes; the adjoint of nodes_to_edges.
VectorField3 edges_to_nodes(const VectorField3& e);
/// Node current -> edges by band-limited interpolation with the symbol
/// e^{i k h/2} (k h/2) / sin(k h/2) along each component's axis (Nyquist
/// zeroed), so that div_edge(current_to_edges(j)) is the spectral divergence
/// of j. A CIC-deposited rho and j then obey the discrete continuity equation
/// up to aliasing and time error.
VectorField3 current_to_edges(const VectorField3& j);
/// Edges -> nodes; the adjoint of current_to_edges, used to gather E.
VectorField3 edges_to_force_nodes(const VectorField3& e);
/// Faces -> nodes by four-point averaging.
VectorField3 faces_to_nodes(const VectorField3& b);

/// E0 = grad(phi) with div(eps_r grad phi) = rho0 solved with the discrete
/// symbol, plus the transverse modes; B0 from the modes only. A non-zero mean
/// of rho0 is removed (logged). Throws ContractViolation for eps_r, mu_r < 1.
EMFieldPair init_compatible(const ScalarField& rho0, const std::vector<EMMode>& modes, double eps_r,
                            double mu_r);

/// Largest stable step sqrt(eps mu) / sqrt(sum 1/h_a^2); step_fields refuses
/// dt >= this bound.
double maxwell_cfl(const PeriodicGrid& grid, double eps_r, double mu_r);

/// B += -dt/2 curl E ; E += dt/eps (curl_face B / mu - current_to_edges(j)) ;
/// B += -dt/2 curl E. Throws StepRefused on a CFL violation.
EMFieldPair step_fields(const EMFieldPair& em, const VectorField3& j_mollified, double dt);

/// 1/2 (eps ||E||^2 + ||B||^2 / mu).
double em_energy_plain(const EMFieldPair& em);
/// Leapfrog energy 1/2 eps ||E||^2 + 1/2 <B^{n-1/2}, B^{n+1/2}> / mu
///   = em_energy_plain - dt^2 / (8 mu) ||curl E||^2,
/// exactly conserved without source and changed by exactly
/// -dt <J_edge, (E^n + E^{n+1}) / 2> with source.
double em_energy(const EMFieldPair& em, double dt);

/// max |div B| over cells, relative to max |B| / h (0 for B = 0).
double div_b_residual(const EMFieldPair& em);
/// ||div(eps E) - rho|| / ||rho|| (absolute norm when rho = 0).
double gauss_residual(const EMFieldPair& em, const ScalarField& rho);

}  // namespace llgvm

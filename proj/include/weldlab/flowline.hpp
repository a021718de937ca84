#pragma once

#include <optional>
#include <vector>

#include "weldlab/conformal.hpp"
#include "weldlab/dirichlet.hpp"
#include "weldlab/field.hpp"
#include "weldlab/loewner.hpp"

namespace weldlab {

struct FlowOptions {
  double abs_tol = 1e-8;
  double max_step = 0.02;     // bounds the spacing of the stored nodes
  double escape = kEscapeRadius;
  double max_length = 1e4;
};

// Arclength-parametrized solution of z' = exp(i phi(z)) through z0, integrated in both
// directions until it leaves the escape disk and continued by straight tails.
JordanCurve integrate_flowline(const ScalarField& phi, cd z0, const FlowOptions& opt = {});

// sup over nodes of |arg eta' - phi(eta)| modulo 2 pi
double tangent_consistency(const ScalarField& phi, const JordanCurve& eta);

constexpr double kFlowlinePrecondition = 1e-3;

// D(phi) = I(eta) + D(phi - P[phi|eta]) for a flow-line eta of exp(i phi)
IdentityReport flowline_identity(const ScalarField& phi, const JordanCurve& eta, const QuadOptions& q = {});
IdentityReport flowline_identity(const ScalarField& phi, const ConformalPair& pair, const QuadOptions& q = {});

// I(eta) = D(P[tau]) with tau the winding of eta; also probes arg f' - P[tau] o f in the upper half-plane
IdentityReport winding_identity(const JordanCurve& curve, int probes = 100);
IdentityReport winding_identity(const ConformalPair& pair, int probes = 100);

// Imaginary part of a complex field: a plane field, or (when empty) the harmonic extension
// of the winding of the curve.
struct ImaginaryPart {
  std::optional<ScalarField> field;
};
// D(psi) = D_H(psi o f + conj(log f')) + D_H*(psi o g + conj(log g'))
IdentityReport complex_identity(const ScalarField& re, const ImaginaryPart& im, const ConformalPair& pair,
                                const QuadOptions& q = {});
IdentityReport complex_identity(const ComplexField& psi, const ConformalPair& pair, const QuadOptions& q = {});

struct SweepResult {
  std::vector<Equipotential> levels;
  std::vector<IdentityReport> verdicts;  // one per consecutive pair of parameters
  double worst_violation = 0;            // largest decrease (disk) or increase (half-plane)
  IdentityReport endpoint;               // curve energy against the level closest to the curve
};
// Disk pairs: energies nondecreasing in r. Half-plane pairs: nonincreasing in y.
SweepResult monotonicity_sweep(const ConformalPair& pair, std::vector<double> params, const MapOptions& opt = {});

}  // namespace weldlab

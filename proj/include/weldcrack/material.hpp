#pragma once

#include <stdexcept>

namespace weldcrack {

// Isotropic plane-strain material described by the two Lame moduli.
// Admissibility requires mu > 0 and lambda + mu > 0 (strong ellipticity
// of the Navier operator and positivity of the stored energy on
// divergence-free states).
struct Material {
    double lambda = 1.0;  // first Lame modulus (stress units)
    double mu = 1.0;      // shear modulus (stress units, > 0)

    Material() = default;
    Material(double lambda_, double mu_) : lambda(lambda_), mu(mu_) {
        if (!(mu > 0.0))
            throw std::invalid_argument("Material: shear modulus mu must be positive");
        if (!(lambda + mu > 0.0))
            throw std::invalid_argument("Material: lambda + mu must be positive");
    }
};

// Kolosov constant for plane strain, kappa = (lambda + 3 mu)/(lambda + mu).
// Drives the crack-tip displacement eigenfunctions; lies in ]1, 3] for
// admissible moduli with lambda >= 0.
inline double kolosov_kappa(const Material& mat) {
    if (!(mat.mu > 0.0) || !(mat.lambda + mat.mu > 0.0))
        throw std::invalid_argument("kolosov_kappa: inadmissible Lame moduli");
    return (mat.lambda + 3.0 * mat.mu) / (mat.lambda + mat.mu);
}

}  // namespace weldcrack

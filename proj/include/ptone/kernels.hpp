#pragma once

#include <cstddef>
#include <span>

namespace ptone::kernels {

// Reductions are split into a fixed number of blocks summed left to right, so
// the serial and OpenMP variants return bit-identical values for any thread count.
inline constexpr std::size_t kReductionBlocks = 64;

/// sum_j wmid_j |(u_{j+1} - u_j)/h_j|^p h_j
double p_energy_serial(std::span<const double> h, std::span<const double> wmid,
                       std::span<const double> u, double p);
double p_energy_parallel(std::span<const double> h, std::span<const double> wmid,
                         std::span<const double> u, double p);

/// sum_i mass_i |u_i|^p
double p_mass_serial(std::span<const double> mass, std::span<const double> u, double p);
double p_mass_parallel(std::span<const double> mass, std::span<const double> u, double p);

/// Gradient of p_energy with respect to u (all nodes).
void p_energy_gradient_serial(std::span<const double> h, std::span<const double> wmid,
                              std::span<const double> u, double p, std::span<double> out);
void p_energy_gradient_parallel(std::span<const double> h, std::span<const double> wmid,
                                std::span<const double> u, double p, std::span<double> out);

/// Staggered flux divergence (wmid phi_p(D))_i - (wmid phi_p(D))_{i-1} divided by the
/// cell measure cell_i at interior nodes; out[0] and out[n-1] are left untouched.
void flux_divergence_serial(std::span<const double> h, std::span<const double> wmid,
                            std::span<const double> cell, std::span<const double> u, double p,
                            std::span<double> out);
void flux_divergence_parallel(std::span<const double> h, std::span<const double> wmid,
                              std::span<const double> cell, std::span<const double> u, double p,
                              std::span<double> out);

}  // namespace ptone::kernels

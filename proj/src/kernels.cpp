#include "ptone/kernels.hpp"

#include <array>
#include <cmath>

#include "ptone/numeric.hpp"

namespace ptone::kernels {
namespace {

template <class Term>
double blocked_sum_serial(std::size_t n, Term term) {
  std::array<double, kReductionBlocks> part{};
  for (std::size_t b = 0; b < kReductionBlocks; ++b) {
    const std::size_t lo = n * b / kReductionBlocks;
    const std::size_t hi = n * (b + 1) / kReductionBlocks;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    part[b] = s;
  }
  double total = 0.0;
  for (double s : part) total += s;
  return total;
}

template <class Term>
double blocked_sum_parallel(std::size_t n, Term term) {
  std::array<double, kReductionBlocks> part{};
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < kReductionBlocks; ++b) {
    const std::size_t lo = n * b / kReductionBlocks;
    const std::size_t hi = n * (b + 1) / kReductionBlocks;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    part[b] = s;
  }
  double total = 0.0;
  for (double s : part) total += s;
  return total;
}

inline double edge_flux(std::span<const double> h, std::span<const double> wmid,
                        std::span<const double> u, double p, std::size_t j) {
  return wmid[j] * phi((u[j + 1] - u[j]) / h[j], p);
}

}  // namespace

double p_energy_serial(std::span<const double> h, std::span<const double> wmid,
                       std::span<const double> u, double p) {
  return blocked_sum_serial(h.size(), [&](std::size_t j) {
    return wmid[j] * std::pow(std::abs((u[j + 1] - u[j]) / h[j]), p) * h[j];
  });
}

double p_energy_parallel(std::span<const double> h, std::span<const double> wmid,
                         std::span<const double> u, double p) {
  return blocked_sum_parallel(h.size(), [&](std::size_t j) {
    return wmid[j] * std::pow(std::abs((u[j + 1] - u[j]) / h[j]), p) * h[j];
  });
}

double p_mass_serial(std::span<const double> mass, std::span<const double> u, double p) {
  return blocked_sum_serial(u.size(), [&](std::size_t i) { return mass[i] * std::pow(std::abs(u[i]), p); });
}

double p_mass_parallel(std::span<const double> mass, std::span<const double> u, double p) {
  return blocked_sum_parallel(u.size(), [&](std::size_t i) { return mass[i] * std::pow(std::abs(u[i]), p); });
}

void p_energy_gradient_serial(std::span<const double> h, std::span<const double> wmid,
                              std::span<const double> u, double p, std::span<double> out) {
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) {
    double g = 0.0;
    if (i > 0) g += edge_flux(h, wmid, u, p, i - 1);
    if (i + 1 < n) g -= edge_flux(h, wmid, u, p, i);
    out[i] = p * g;
  }
}

void p_energy_gradient_parallel(std::span<const double> h, std::span<const double> wmid,
                                std::span<const double> u, double p, std::span<double> out) {
  const std::size_t n = u.size();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    double g = 0.0;
    if (i > 0) g += edge_flux(h, wmid, u, p, i - 1);
    if (i + 1 < n) g -= edge_flux(h, wmid, u, p, i);
    out[i] = p * g;
  }
}

void flux_divergence_serial(std::span<const double> h, std::span<const double> wmid,
                            std::span<const double> cell, std::span<const double> u, double p,
                            std::span<double> out) {
  const std::size_t n = u.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = (edge_flux(h, wmid, u, p, i) - edge_flux(h, wmid, u, p, i - 1)) / cell[i];
  }
}

void flux_divergence_parallel(std::span<const double> h, std::span<const double> wmid,
                              std::span<const double> cell, std::span<const double> u, double p,
                              std::span<double> out) {
  const std::size_t n = u.size();
  if (n < 3) return;
#pragma omp parallel for schedule(static)
  for (std::size_t i = 1; i < n - 1; ++i) {
    out[i] = (edge_flux(h, wmid, u, p, i) - edge_flux(h, wmid, u, p, i - 1)) / cell[i];
  }
}

}  // namespace ptone::kernels

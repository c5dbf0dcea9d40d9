// statistics.hpp — photon-number distributions and factorial moments

#pragma once

#include <vector>

namespace jcl::stats {

// T[n] for n = 0..N, where N is chosen so the dropped tail is below rel_tail * max T.
std::vector<double> poisson(double n_a, double rel_tail = 1e-16);
std::vector<double> thermal(double n_a, double rel_tail = 1e-16);
// Displaced thermal field with n_coh coherent and n_th thermal photons.
std::vector<double> cothermal(double n_coh, double n_th, double rel_tail = 1e-16);

double laguerre(int n, double x);

// Factorial moment <a^+^k a^k> = n_th^k k! L_k(-n_coh/n_th), finite at n_th = 0.
double cothermal_moment(int k, double n_coh, double n_th);

// <a^+^k a^k> of an arbitrary distribution.
double factorial_moment(const std::vector<double>& T, int k);

// Index past which every T[n] < rel * max T.
std::size_t support(const std::vector<double>& T, double rel = 1e-12);

}  // namespace jcl::stats

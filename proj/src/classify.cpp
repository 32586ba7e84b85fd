#include "sap/classify.hpp"

#include <cmath>
#include <stdexcept>

namespace sap {

std::vector<ThresholdTuple> threshold_tuples(const Rat& epsilon) {
  if (epsilon <= 0 || epsilon > Rat(1, 2)) throw std::invalid_argument("epsilon must be in (0, 1/2]");
  const Rat inv = 1 / epsilon;
  if (inv.get_den() != 1) throw std::invalid_argument("1/epsilon must be an integer");
  if (!inv.get_num().fits_ulong_p()) throw std::invalid_argument("1/epsilon too large");
  const unsigned long k_max = inv.get_num().get_ui();

  std::vector<ThresholdTuple> tuples;
  // (1/eps)^k, maintained incrementally. Note mu_k = delta_{k+1}: the size
  // windows chain, which is what makes the middle band droppable.
  unsigned long inv_pow = 1;
  for (unsigned long k = 1; k <= k_max; ++k) {
    inv_pow *= k_max;
    const unsigned long delta_exp = 10UL * k * inv_pow;
    const unsigned long mu_exp = 10UL * (k + 1) * inv_pow * k_max;
    if (mu_exp > 100000000UL) throw std::invalid_argument("epsilon too small for exact thresholds");
    ThresholdTuple t;
    t.k = static_cast<int>(k);
    t.delta = rat_pow(epsilon, delta_exp);
    t.mu = rat_pow(epsilon, mu_exp);
    tuples.push_back(std::move(t));
  }
  return tuples;
}

TaskSplit split_tasks(const SapInstance& instance, const Rat& mu, const Rat& delta) {
  if (!(0 < mu && mu <= delta)) throw std::invalid_argument("need 0 < mu <= delta");
  TaskSplit split;
  for (const Task& task : instance.tasks()) {
    const Rat b(static_cast<long>(bottleneck(instance, task)));
    const Rat d(static_cast<long>(task.d));
    if (d > delta * b) {
      split.large.push_back(task.id);
    } else if (d <= mu * b) {
      split.small.push_back(task.id);
    } else {
      split.middle.push_back(task.id);
    }
  }
  return split;
}

long long large_per_edge_bound(long long u_e, const Rat& delta) {
  if (u_e < 2) throw std::invalid_argument("large_per_edge_bound needs u_e >= 2");
  if (!(0 < delta && delta <= 1)) throw std::invalid_argument("delta must be in (0, 1]");
  const mpz_class p = delta.get_num(), q = delta.get_den();
  if (!p.fits_ulong_p() || !q.fits_ulong_p()) throw std::invalid_argument("delta too extreme");
  const unsigned long p2 = p.get_ui() * p.get_ui();
  const unsigned long q2 = q.get_ui() * q.get_ui();
  mpz_class u_pow;  // u^(q^2)
  mpz_pow_ui(u_pow.get_mpz_t(), mpz_class(static_cast<long>(u_e)).get_mpz_t(), q2);
  // Smallest k with 2^(k*p2) >= u^(q2); start from a float estimate.
  long long k = static_cast<long long>(std::floor(std::log2(static_cast<double>(u_e)) *
                                                  static_cast<double>(q2) / static_cast<double>(p2))) -
                2;
  if (k < 0) k = 0;
  while (true) {
    mpz_class two_pow;
    mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, static_cast<unsigned long>(k) * p2);
    if (two_pow >= u_pow) return k;
    ++k;
  }
}

}  // namespace sap

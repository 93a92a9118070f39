#pragma once

#include <functional>
#include <vector>

#include "freelunch/rng.hpp"

namespace freelunch {

// Finite-support innovation law. Atom values are strictly increasing and every
// probability lies in (0,1]; probabilities sum to 1 within 1e−12.
class InnovationLaw {
public:
  struct Atom {
    double value;
    double prob;
  };

  // Atoms {(−1, 1/2), (+1, 1/2)}.
  static InnovationLaw rademacher();

  // Mean-zero two-point law on {down, up}: p_up = −down/(up−down). Requires
  // down < 0 < up.
  static InnovationLaw two_point(double down, double up);

  // General finite-support law; values strictly increasing, probabilities in
  // (0,1] summing to 1 within 1e−12.
  static InnovationLaw from_atoms(std::vector<double> values, std::vector<double> probs);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  // Essential supremum M and m = −(essential infimum); both attained by atoms.
  double M() const noexcept { return atoms_.back().value; }
  double m() const noexcept { return -atoms_.front().value; }

  double mean() const noexcept { return mean_; }
  double second_moment() const noexcept { return second_; }
  double variance() const noexcept { return second_ - mean_ * mean_; }
  double fourth_moment() const noexcept { return fourth_; }

  // One draw; the returned value is exactly one of the atom values.
  double sample(Rng& rng) const;

private:
  explicit InnovationLaw(std::vector<Atom> atoms);

  std::vector<Atom> atoms_;
  std::vector<double> cum_; // cumulative probabilities, last forced to 1
  double mean_ = 0.0;
  double second_ = 0.0;
  double fourth_ = 0.0;
};

// Per-n law sequence; the default provider returns one fixed law for every n.
using LawProvider = std::function<InnovationLaw(long n)>;

inline LawProvider constant_law_provider(InnovationLaw law) {
  return [law = std::move(law)](long) { return law; };
}

} // namespace freelunch

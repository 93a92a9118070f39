#include "freelunch/innovation.hpp"

#include <cmath>

#include "freelunch/errors.hpp"

namespace freelunch {

InnovationLaw::InnovationLaw(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw DomainError("innovation law needs at least one atom");
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!std::isfinite(a.value)) throw DomainError("innovation law: atom value must be finite");
    if (!(a.prob > 0.0 && a.prob <= 1.0)) {
      throw DomainError("innovation law: probabilities must lie in (0,1]");
    }
    if (i > 0 && !(atoms_[i - 1].value < a.value)) {
      throw DomainError("innovation law: atom values must be strictly increasing");
    }
    total += a.prob;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("innovation law: probabilities must sum to 1 within 1e-12");
  }
  cum_.reserve(atoms_.size());
  double running = 0.0;
  for (const Atom& a : atoms_) {
    running += a.prob;
    cum_.push_back(running);
    mean_ += a.prob * a.value;
    second_ += a.prob * a.value * a.value;
    fourth_ += a.prob * a.value * a.value * a.value * a.value;
  }
  cum_.back() = 1.0;
}

InnovationLaw InnovationLaw::rademacher() {
  return InnovationLaw({{-1.0, 0.5}, {1.0, 0.5}});
}

InnovationLaw InnovationLaw::two_point(double down, double up) {
  if (!(down < 0.0) || !(up > 0.0)) {
    throw DomainError("two_point law: requires down < 0 < up");
  }
  const double p_up = -down / (up - down);
  const double p_down = up / (up - down);
  return InnovationLaw({{down, p_down}, {up, p_up}});
}

InnovationLaw InnovationLaw::from_atoms(std::vector<double> values,
                                        std::vector<double> probs) {
  if (values.size() != probs.size()) {
    throw LengthMismatch("innovation law: value and probability lists differ in length");
  }
  std::vector<Atom> atoms;
  atoms.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) atoms.push_back({values[i], probs[i]});
  return InnovationLaw(std::move(atoms));
}

double InnovationLaw::sample(Rng& rng) const {
  const double u = rng.next_unit();
  for (std::size_t i = 0; i + 1 < cum_.size(); ++i) {
    if (u < cum_[i]) return atoms_[i].value;
  }
  return atoms_.back().value;
}

} // namespace freelunch

#include "mfock/fock.hpp"

#include <sstream>

namespace mfock {

std::string FockState::str() const {
  static constexpr const char* names[] = {"a", "b", "q", "p"};
  std::ostringstream os;
  os << "|";
  bool any = false;
  for (int mu = 0; mu < kMaxDim; ++mu)
    if (lattice[mu] != 0) any = true;
  if (any) {
    os << "P=(";
    for (int mu = 0; mu < kMaxDim; ++mu) os << (mu ? "," : "") << int(lattice[mu]);
    os << ")";
  }
  for (auto c : quanta)
    os << " " << names[static_cast<int>(quantum_kind(c))] << quantum_comp(c) << "(" << quantum_mode(c) << ")";
  os << ">";
  return os.str();
}

}  // namespace mfock

#include "hqom/space.hpp"

#include <bit>
#include <sstream>

namespace hqom {

std::string to_string(Subsystem s) {
  switch (s) {
    case Subsystem::qubit:
      return "qubit";
    case Subsystem::cavity:
      return "cavity";
    case Subsystem::mechanics:
      return "mechanics";
  }
  return "?";
}

SubsystemSet::SubsystemSet(std::initializer_list<Subsystem> parts) {
  for (auto p : parts) bits_ |= 1U << static_cast<int>(p);
}

SubsystemSet SubsystemSet::from_bits(unsigned bits) {
  SubsystemSet s;
  s.bits_ = bits & 0b111U;
  return s;
}

int SubsystemSet::size() const { return std::popcount(bits_); }

std::vector<Subsystem> SubsystemSet::members() const {
  std::vector<Subsystem> out;
  for (int i = 0; i < 3; ++i)
    if ((bits_ >> i) & 1U) out.push_back(static_cast<Subsystem>(i));
  return out;
}

std::string SubsystemSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (auto s : members()) {
    if (!first) out += ",";
    out += hqom::to_string(s);
    first = false;
  }
  return out + "}";
}

Space::Space(std::vector<Factor> factors) : factors_(std::move(factors)) {
  int last = -1;
  for (const auto& f : factors_) {
    const int k = static_cast<int>(f.kind);
    if (k <= last) throw ValidationError("space factors must be distinct and ordered qubit, cavity, mechanics");
    if (f.dim < 1) throw ValidationError("space factor " + hqom::to_string(f.kind) + " needs dimension >= 1");
    if (f.kind == Subsystem::qubit && f.dim != 2) throw ValidationError("qubit factor must have dimension 2");
    last = k;
    dim_ *= f.dim;
  }
}

Space Space::composite(Index n_cav, Index n_mech) {
  return Space({{Subsystem::qubit, 2}, {Subsystem::cavity, n_cav}, {Subsystem::mechanics, n_mech}});
}
Space Space::qubit() { return Space({{Subsystem::qubit, 2}}); }
Space Space::cavity(Index n_cav) { return Space({{Subsystem::cavity, n_cav}}); }
Space Space::mechanics(Index n_mech) { return Space({{Subsystem::mechanics, n_mech}}); }
Space Space::qubit_cavity(Index n_cav) { return Space({{Subsystem::qubit, 2}, {Subsystem::cavity, n_cav}}); }

SubsystemSet Space::subsystems() const {
  unsigned bits = 0;
  for (const auto& f : factors_) bits |= 1U << static_cast<int>(f.kind);
  return SubsystemSet::from_bits(bits);
}

Index Space::dim_of(Subsystem s) const {
  for (const auto& f : factors_)
    if (f.kind == s) return f.dim;
  throw ValidationError("space " + to_string() + " has no " + hqom::to_string(s) + " factor");
}

Index Space::stride_of(Subsystem s) const {
  Index stride = 1;
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
    if (it->kind == s) return stride;
    stride *= it->dim;
  }
  throw ValidationError("space " + to_string() + " has no " + hqom::to_string(s) + " factor");
}

Space Space::restrict_to(SubsystemSet keep) const {
  if (keep.empty()) throw ValidationError("cannot restrict a space to an empty subsystem set");
  if (!(keep.without(subsystems())).empty())
    throw ValidationError("subset " + keep.to_string() + " is not contained in " + to_string());
  std::vector<Factor> out;
  for (const auto& f : factors_)
    if (keep.contains(f.kind)) out.push_back(f);
  return Space(std::move(out));
}

Index Space::index(int q, Index n, Index m) const {
  if (factors_.size() != 3) throw ValidationError("index(q, n, m) needs the full composite space");
  return ((q * factors_[1].dim) + n) * factors_[2].dim + m;
}

std::string Space::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << " x ";
    os << hqom::to_string(factors_[i].kind) << ":" << factors_[i].dim;
  }
  os << "]";
  return os.str();
}

}  // namespace hqom

#pragma once

#include <array>
#include <initializer_list>
#include <string>
#include <vector>

#include "hqom/common.hpp"

namespace hqom {

/// The three parties of the hybrid system, in their normative tensor order.
enum class Subsystem : int { qubit = 0, cavity = 1, mechanics = 2 };

std::string to_string(Subsystem s);

/// Set of subsystems as a bit mask over {qubit, cavity, mechanics}.
class SubsystemSet {
 public:
  constexpr SubsystemSet() = default;
  SubsystemSet(std::initializer_list<Subsystem> parts);

  bool contains(Subsystem s) const { return (bits_ >> static_cast<int>(s)) & 1U; }
  bool empty() const { return bits_ == 0; }
  int size() const;
  unsigned bits() const { return bits_; }

  SubsystemSet operator|(SubsystemSet other) const { return from_bits(bits_ | other.bits_); }
  SubsystemSet operator&(SubsystemSet other) const { return from_bits(bits_ & other.bits_); }
  SubsystemSet without(SubsystemSet other) const { return from_bits(bits_ & ~other.bits_); }
  bool operator==(const SubsystemSet&) const = default;

  std::vector<Subsystem> members() const;
  std::string to_string() const;

  static SubsystemSet from_bits(unsigned bits);
  static SubsystemSet all() { return from_bits(0b111U); }

 private:
  unsigned bits_ = 0;
};

/// Ordered tensor-product space over a subset of {qubit, cavity, mechanics}.
///
/// Factors always appear in the order qubit, cavity, mechanics, and the last
/// factor varies fastest. For the full composite space the basis index of
/// |q, n, m> is ((q * n_cav) + n) * n_mech + m, with q = 0 for spin up.
class Space {
 public:
  struct Factor {
    Subsystem kind;
    Index dim;
    bool operator==(const Factor&) const = default;
  };

  Space() = default;
  explicit Space(std::vector<Factor> factors);

  static Space composite(Index n_cav, Index n_mech);
  static Space qubit();
  static Space cavity(Index n_cav);
  static Space mechanics(Index n_mech);
  static Space qubit_cavity(Index n_cav);

  Index dim() const { return dim_; }
  const std::vector<Factor>& factors() const { return factors_; }
  SubsystemSet subsystems() const;
  bool contains(Subsystem s) const { return subsystems().contains(s); }
  Index dim_of(Subsystem s) const;
  /// Stride of the given factor in the flattened index.
  Index stride_of(Subsystem s) const;

  /// Sub-space holding only the listed subsystems (must all be present).
  Space restrict_to(SubsystemSet keep) const;

  /// Basis index for the full composite space.
  Index index(int q, Index n, Index m) const;

  bool operator==(const Space&) const = default;
  std::string to_string() const;

 private:
  std::vector<Factor> factors_;
  Index dim_ = 1;
};

}  // namespace hqom

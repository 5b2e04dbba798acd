// Copyright 2026 The clsq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "clsq/core.hpp"

namespace clsq {

/** Single-qubit Pauli letters; X, Y, Z are tau_1, tau_2, tau_3. */
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/**
 * A tensor product of Pauli letters with an exact phase i^phase.
 *
 * Letter 0 is the leftmost tensor factor (qubit 1). Multiplication is exact:
 * phases are tracked as integers mod 4, so identities like
 * (Z X X)(X Z X)(X X Z) = -(Z Z Z) hold without rounding.
 */
class PauliString {
 public:
  PauliString() = default;
  PauliString(std::vector<Pauli> letters, int phase = 0)
      : letters_(std::move(letters)), phase_(((phase % 4) + 4) % 4) {}

  /// Parses "+XZI", "-ZZZ", "iXY" or "-iYY". A missing sign means +.
  static PauliString parse(std::string_view text) {
    int phase = 0;
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      if (text[pos] == '-') phase = 2;
      ++pos;
    }
    if (pos < text.size() && text[pos] == 'i') {
      phase += 1;
      ++pos;
    }
    std::vector<Pauli> letters;
    for (; pos < text.size(); ++pos) {
      switch (text[pos]) {
        case 'I': case '_': case '1': letters.push_back(Pauli::I); break;
        case 'X': letters.push_back(Pauli::X); break;
        case 'Y': letters.push_back(Pauli::Y); break;
        case 'Z': letters.push_back(Pauli::Z); break;
        default:
          throw InvalidArgument("bad Pauli letter in '" + std::string(text) + "'");
      }
    }
    if (letters.empty()) throw InvalidArgument("empty Pauli string");
    return PauliString(std::move(letters), phase);
  }

  /// Single-letter string on qubit `qubit` (0-based) of a `num_qubits` register.
  static PauliString single(int num_qubits, int qubit, Pauli p) {
    std::vector<Pauli> letters(static_cast<std::size_t>(num_qubits), Pauli::I);
    letters.at(static_cast<std::size_t>(qubit)) = p;
    return PauliString(std::move(letters));
  }

  int num_qubits() const { return static_cast<int>(letters_.size()); }
  const std::vector<Pauli>& letters() const { return letters_; }
  int phase() const { return phase_; }
  bool is_identity() const {
    for (Pauli p : letters_)
      if (p != Pauli::I) return false;
    return true;
  }
  bool is_hermitian() const { return phase_ % 2 == 0; }

  PauliString negated() const { return PauliString(letters_, phase_ + 2); }

  PauliString operator*(const PauliString& rhs) const {
    if (rhs.num_qubits() != num_qubits())
      throw InvalidArgument("Pauli string length mismatch");
    std::vector<Pauli> out(letters_.size());
    int phase = phase_ + rhs.phase_;
    for (std::size_t q = 0; q < letters_.size(); ++q) {
      const int a = static_cast<int>(letters_[q]);
      const int b = static_cast<int>(rhs.letters_[q]);
      if (a == 0) {
        out[q] = rhs.letters_[q];
      } else if (b == 0) {
        out[q] = letters_[q];
      } else if (a == b) {
        out[q] = Pauli::I;
      } else {
        // XY = iZ, YZ = iX, ZX = iY; reversed order picks up -i.
        out[q] = static_cast<Pauli>(6 - a - b);
        phase += ((b - a + 3) % 3 == 1) ? 1 : 3;
      }
    }
    return PauliString(std::move(out), phase);
  }

  bool operator==(const PauliString& rhs) const {
    return phase_ == rhs.phase_ && letters_ == rhs.letters_;
  }

  /// Same letters; phases may differ.
  bool same_letters(const PauliString& rhs) const { return letters_ == rhs.letters_; }

  bool commutes_with(const PauliString& rhs) const {
    int anti = 0;
    for (std::size_t q = 0; q < letters_.size(); ++q) {
      const auto a = letters_[q];
      const auto b = rhs.letters_.at(q);
      if (a != Pauli::I && b != Pauli::I && a != b) ++anti;
    }
    return anti % 2 == 0;
  }

  Matrix to_matrix() const {
    Matrix out = Matrix::Identity(1, 1);
    for (Pauli p : letters_) out = kron(out, letter_matrix(p));
    static const Complex kPhase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return kPhase[phase_] * out;
  }

  std::string str() const {
    static const char* kSign[4] = {"+", "+i", "-", "-i"};
    std::string s = kSign[phase_];
    for (Pauli p : letters_) s += "IXYZ"[static_cast<int>(p)];
    return s;
  }

  static Matrix letter_matrix(Pauli p) {
    Matrix m(2, 2);
    switch (p) {
      case Pauli::I: m << 1, 0, 0, 1; break;
      case Pauli::X: m << 0, 1, 1, 0; break;
      case Pauli::Y: m << 0, -kI, kI, 0; break;
      case Pauli::Z: m << 1, 0, 0, -1; break;
    }
    return m;
  }

 private:
  std::vector<Pauli> letters_;
  int phase_ = 0;
};

}  // namespace clsq

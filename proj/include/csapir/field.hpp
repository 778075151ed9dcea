// Copyright 2026 The csapir Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace csapir {

// Precondition or parameter-constraint violation. The CLI maps this to exit
// status 1.
class ConstraintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class FieldMismatchError : public ConstraintError {
 public:
  using ConstraintError::ConstraintError;
};

class DivisionByZeroError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

bool is_prime(std::uint64_t n);

// Smallest prime p with p >= n.
std::uint64_t next_prime(std::uint64_t n);

class FieldElement;

// The prime field GF(q). Cheap to copy; two fields compare equal iff their
// moduli match.
class Field {
 public:
  // Throws ConstraintError unless q is prime. q must stay below 2^32 so
  // products fit in 64 bits.
  explicit Field(std::uint64_t q);

  std::uint64_t modulus() const noexcept { return q_; }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement element(std::int64_t v) const;
  FieldElement from_residue(std::uint64_t v) const;

  bool operator==(const Field&) const = default;

 private:
  std::uint64_t q_;
};

// A fully reduced residue tagged with its modulus. Arithmetic between
// elements of different fields throws FieldMismatchError.
class FieldElement {
 public:
  FieldElement() = default;

  std::uint64_t value() const noexcept { return value_; }
  std::uint64_t modulus() const noexcept { return q_; }
  Field field() const { return Field(q_); }
  bool is_zero() const noexcept { return value_ == 0; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;

  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

  // Multiplicative inverse; throws DivisionByZeroError on zero.
  FieldElement inv() const;
  // pow(0) == 1 for every base, including zero.
  FieldElement pow(std::uint64_t e) const;
  // Signed exponent; negative powers go through inv().
  FieldElement pow(std::int64_t e) const;
  FieldElement pow(int e) const { return pow(static_cast<std::int64_t>(e)); }

  bool operator==(const FieldElement& o) const noexcept {
    return value_ == o.value_ && q_ == o.q_;
  }

 private:
  friend class Field;
  FieldElement(std::uint64_t v, std::uint64_t q) : value_(v), q_(q) {}

  void check_same_field(const FieldElement& o) const;

  std::uint64_t value_ = 0;
  std::uint64_t q_ = 0;
};

inline FieldElement add(const FieldElement& a, const FieldElement& b) { return a + b; }
inline FieldElement sub(const FieldElement& a, const FieldElement& b) { return a - b; }
inline FieldElement mul(const FieldElement& a, const FieldElement& b) { return a * b; }
inline FieldElement neg(const FieldElement& a) { return -a; }
inline FieldElement inv(const FieldElement& a) { return a.inv(); }
inline FieldElement pow(const FieldElement& a, std::uint64_t e) { return a.pow(e); }

std::ostream& operator<<(std::ostream& os, const FieldElement& a);

using FieldVector = std::vector<FieldElement>;

// Inner product of equal-length vectors.
FieldElement dot(const Field& field, const FieldVector& a, const FieldVector& b);

}  // namespace csapir

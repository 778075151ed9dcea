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

#include "csapir/field.hpp"

namespace csapir {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  if (n <= 2) return 2;
  while (!is_prime(n)) ++n;
  return n;
}

Field::Field(std::uint64_t q) : q_(q) {
  if (q >= (std::uint64_t{1} << 32)) {
    throw ConstraintError("field modulus " + std::to_string(q) +
                          " exceeds the supported range (q < 2^32)");
  }
  if (!is_prime(q)) {
    throw ConstraintError("field modulus " + std::to_string(q) + " is not prime");
  }
}

FieldElement Field::zero() const { return FieldElement(0, q_); }
FieldElement Field::one() const { return FieldElement(1, q_); }

FieldElement Field::element(std::int64_t v) const {
  const auto q = static_cast<std::int64_t>(q_);
  std::int64_t r = v % q;
  if (r < 0) r += q;
  return FieldElement(static_cast<std::uint64_t>(r), q_);
}

FieldElement Field::from_residue(std::uint64_t v) const {
  return FieldElement(v % q_, q_);
}

void FieldElement::check_same_field(const FieldElement& o) const {
  if (q_ != o.q_) {
    throw FieldMismatchError("field mismatch: GF(" + std::to_string(q_) + ") vs GF(" +
                             std::to_string(o.q_) + ")");
  }
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check_same_field(o);
  std::uint64_t s = value_ + o.value_;
  if (s >= q_) s -= q_;
  return FieldElement(s, q_);
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  check_same_field(o);
  return FieldElement(value_ >= o.value_ ? value_ - o.value_ : value_ + q_ - o.value_, q_);
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_same_field(o);
  return FieldElement(value_ * o.value_ % q_, q_);
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
  return *this * o.inv();
}

FieldElement FieldElement::operator-() const {
  return FieldElement(value_ == 0 ? 0 : q_ - value_, q_);
}

FieldElement FieldElement::inv() const {
  if (value_ == 0) throw DivisionByZeroError("inverse of zero in GF(" + std::to_string(q_) + ")");
  // Extended Euclid on (value, q).
  std::int64_t r0 = static_cast<std::int64_t>(q_), r1 = static_cast<std::int64_t>(value_);
  std::int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    const std::int64_t quot = r0 / r1;
    std::int64_t tmp = r0 - quot * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - quot * t1;
    t0 = t1;
    t1 = tmp;
  }
  return Field(q_).element(t0);
}

FieldElement FieldElement::pow(std::uint64_t e) const {
  std::uint64_t result = 1 % q_;
  std::uint64_t base = value_;
  while (e > 0) {
    if (e & 1) result = result * base % q_;
    base = base * base % q_;
    e >>= 1;
  }
  return FieldElement(result, q_);
}

FieldElement FieldElement::pow(std::int64_t e) const {
  if (e >= 0) return pow(static_cast<std::uint64_t>(e));
  return inv().pow(static_cast<std::uint64_t>(-e));
}

std::ostream& operator<<(std::ostream& os, const FieldElement& a) { return os << a.value(); }

FieldElement dot(const Field& field, const FieldVector& a, const FieldVector& b) {
  if (a.size() != b.size()) {
    throw ConstraintError("dot: length mismatch " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
  FieldElement acc = field.zero();
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace csapir

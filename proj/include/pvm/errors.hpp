// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace pvm {

/// The postselected projection vanishes (destructive interference of the two
/// displaced branches); no normalized pointer state exists.
struct PostselectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// g2 is undefined because one of the mean photon numbers is zero.
struct UndefinedCorrelation : std::domain_error {
  using std::domain_error::domain_error;
};

/// The non-postselected pointer shift vanishes, so the SNR ratio is undefined.
struct DegenerateShift : std::domain_error {
  using std::domain_error::domain_error;
};

/// A position variance evaluated to zero or a negative number.
struct VarianceCollapse : std::domain_error {
  using std::domain_error::domain_error;
};

/// A closed-form expression failed an internal self-consistency check.
struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace pvm

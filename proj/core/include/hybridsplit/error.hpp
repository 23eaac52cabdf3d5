// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace hybridsplit {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class HexError : public Error {
  public:
    using Error::Error;
};

class CryptoError : public Error {
  public:
    using Error::Error;
};

// Bad genesis, scenario or contract-spec input.
class ConfigError : public Error {
  public:
    using Error::Error;
};

// A transaction the ledger refuses to include at all (no nonce bump, no gas).
class TransactionRejected : public Error {
  public:
    using Error::Error;
};

class DecodeError : public Error {
  public:
    using Error::Error;
};

class SplitError : public Error {
  public:
    using Error::Error;
};

class ProtocolError : public Error {
  public:
    using Error::Error;
};

}  // namespace hybridsplit

/*
 * Copyright (C) 2026 The ManifestScope Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace manifestscope {

// Root of the analyzer error hierarchy. Every parser failure surfaces as a
// subclass carrying a closed `Kind` enum; malformed inputs must never escape
// as anything else.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ZipError : public Error {
 public:
  enum class Kind {
    NotAZip,
    TruncatedArchive,
    UnsupportedCompressionMethod,
    UnsupportedArchiveFeature,
    BadEntryName,
    EntryNotFound,
    CorruptEntry,
  };

  ZipError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class AxmlError : public Error {
 public:
  enum class Kind {
    NotBinaryXml,
    MalformedChunk,
    DanglingStringIndex,
  };

  AxmlError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class DexError : public Error {
 public:
  enum class Kind {
    NotADex,
    TruncatedDex,
    BadStringOffset,
  };

  DexError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class ManifestError : public Error {
 public:
  enum class Kind {
    NotAManifest,
  };

  ManifestError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class SignatureError : public Error {
 public:
  enum class Kind {
    MalformedSignatureFile,
    DuplicateSignature,
  };

  SignatureError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class PolicyError : public Error {
 public:
  explicit PolicyError(const std::string& what) : Error(what) {}
};

class ReportError : public Error {
 public:
  enum class Kind {
    DuplicateAppId,
    MisalignedInputs,
    MissingLabeling,
    MalformedLabeling,
    MalformedReport,
  };

  ReportError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace manifestscope

#pragma once

#include <stdexcept>
#include <string>

namespace icdlab {

struct NotHermitian : std::runtime_error {
  explicit NotHermitian(const std::string& what) : std::runtime_error(what) {}
};

struct NotPSD : std::runtime_error {
  explicit NotPSD(const std::string& what) : std::runtime_error(what) {}
};

struct NotSymmetric : std::runtime_error {
  explicit NotSymmetric(const std::string& what) : std::runtime_error(what) {}
};

struct RankDeficient : std::runtime_error {
  explicit RankDeficient(const std::string& what) : std::runtime_error(what) {}
};

struct SingularOnRange : std::runtime_error {
  explicit SingularOnRange(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidWeights : std::runtime_error {
  explicit InvalidWeights(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidState : std::runtime_error {
  explicit InvalidState(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidParams : std::runtime_error {
  explicit InvalidParams(const std::string& what) : std::runtime_error(what) {}
};

struct OutOfRange : std::runtime_error {
  explicit OutOfRange(const std::string& what) : std::runtime_error(what) {}
};

struct ThetaOutOfRange : std::runtime_error {
  explicit ThetaOutOfRange(const std::string& what) : std::runtime_error(what) {}
};

struct ThetaBoundary : std::runtime_error {
  explicit ThetaBoundary(const std::string& what) : std::runtime_error(what) {}
};

struct NotRegion1 : std::runtime_error {
  explicit NotRegion1(const std::string& what) : std::runtime_error(what) {}
};

struct NotOnBoundary : std::runtime_error {
  explicit NotOnBoundary(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace icdlab

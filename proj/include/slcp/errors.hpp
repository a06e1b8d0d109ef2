#pragma once

#include <stdexcept>
#include <string>

namespace slcp {

// Base class for all solver-domain failures. Each subtype corresponds to a
// distinct contract violation so callers can branch on what went wrong.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonFinite : Error {
    explicit NonFinite(const std::string& msg) : Error("non-finite input: " + msg) {}
};

struct NotSorted : Error {
    explicit NotSorted(const std::string& msg) : Error("descending order required: " + msg) {}
};

struct DegenerateArrow : Error {
    explicit DegenerateArrow(const std::string& msg) : Error("arrow estimate out of regime: " + msg) {}
};

struct SolveFailed : Error {
    explicit SolveFailed(const std::string& msg) : Error("linear solve failed: " + msg) {}
};

struct PhaseOutOfRange : Error {
    explicit PhaseOutOfRange(const std::string& msg) : Error("phase value out of range: " + msg) {}
};

struct SamplerStalled : Error {
    explicit SamplerStalled(const std::string& msg) : Error("cone sampler stalled: " + msg) {}
};

struct LeftCone : Error {
    explicit LeftCone(const std::string& msg) : Error("perturbation left the admissible cone: " + msg) {}
};

struct CalibrationFailed : Error {
    explicit CalibrationFailed(const std::string& msg) : Error("concavity calibration failed: " + msg) {}
};

struct ConeBoundary : Error {
    explicit ConeBoundary(const std::string& msg) : Error("point too close to cone boundary: " + msg) {}
};

struct BoundaryNode : Error {
    explicit BoundaryNode(const std::string& msg) : Error("interior node required: " + msg) {}
};

struct MarginTooSmall : Error {
    explicit MarginTooSmall(const std::string& msg) : Error("phase margin too small: " + msg) {}
};

struct InadmissibleIterate : Error {
    explicit InadmissibleIterate(const std::string& msg) : Error("inadmissible iterate: " + msg) {}
};

struct LineSearchFailed : Error {
    explicit LineSearchFailed(const std::string& msg) : Error("line search failed: " + msg) {}
};

struct NotConverged : Error {
    explicit NotConverged(const std::string& msg) : Error("newton iteration did not converge: " + msg) {}
};

struct HomotopyStalled : Error {
    explicit HomotopyStalled(const std::string& msg) : Error("homotopy increment floored out: " + msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error("validation error: " + msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error("i/o error: " + msg) {}
};

} // namespace slcp

#pragma once

#include <stdexcept>
#include <string>

namespace featurex {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PairingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpillIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroMassError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ClassCountError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientClassItems : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoFeasiblePoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownProfile : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PackingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace featurex

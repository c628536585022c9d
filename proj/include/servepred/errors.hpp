// errors.hpp - exception types shared across the library
#pragma once

#include <stdexcept>
#include <string>

namespace servepred {

// A serve token that cannot be parsed at all (empty or illegal leading char).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(std::string token)
        : std::runtime_error("unparseable serve token: \"" + token + "\""),
          token_(std::move(token)) {}
    const std::string& token() const { return token_; }

private:
    std::string token_;
};

// Misuse of the scoring state machine, e.g. applying a point to a finished match.
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Charted and engine-derived servers disagree beyond the configured tolerance.
class ReplayDivergence : public std::runtime_error {
public:
    ReplayDivergence(std::string match_id, int mismatches, int points)
        : std::runtime_error("replay divergence in match " + match_id + ": " +
                             std::to_string(mismatches) + "/" + std::to_string(points) +
                             " server mismatches"),
          match_id_(std::move(match_id)), mismatches_(mismatches), points_(points) {}
    const std::string& match_id() const { return match_id_; }
    int mismatches() const { return mismatches_; }
    int points() const { return points_; }

private:
    std::string match_id_;
    int mismatches_;
    int points_;
};

// Prediction input columns do not match the training layout.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Metric requested on empty input.
class UndefinedMetric : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Operation not available for this model kind (e.g. importances of an SVM).
class UnsupportedModel : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Fatal input problems: missing files, missing mandatory columns, bad config.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace servepred

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hypclt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- digraph

class NondeterministicLabel : public Error {
public:
    NondeterministicLabel(std::size_t vertex, std::string letter)
        : Error("vertex " + std::to_string(vertex + 1) + " has two outgoing edges labelled '" +
                letter + "'"),
          vertex(vertex), letter(std::move(letter)) {}
    std::size_t vertex;
    std::string letter;
};

class UnreachableVertex : public Error {
public:
    explicit UnreachableVertex(std::size_t vertex)
        : Error("vertex " + std::to_string(vertex + 1) + " is not reachable from the initial vertex"),
          vertex(vertex) {}
    std::size_t vertex;
};

class IncomingEdgeToInitial : public Error {
public:
    IncomingEdgeToInitial() : Error("the initial vertex must not have incoming edges") {}
};

class InvalidDigraph : public Error {
public:
    using Error::Error;
};

class InsufficientGrowth : public Error {
public:
    InsufficientGrowth() : Error("accepted language is finite; path counts do not grow") {}
};

// ---------------------------------------------------------------- groups

class UnknownLetter : public Error {
public:
    explicit UnknownLetter(std::string letter)
        : Error("unknown letter '" + letter + "'"), letter(std::move(letter)) {}
    std::string letter;
};

class UnknownGenset : public Error {
public:
    explicit UnknownGenset(const std::string& name) : Error("unknown generating set '" + name + "'") {}
};

class RadiusExceeded : public Error {
public:
    RadiusExceeded(int requested, int maximum)
        : Error("radius " + std::to_string(requested) + " exceeds the configured maximum " +
                std::to_string(maximum)),
          requested(requested), maximum(maximum) {}
    int requested;
    int maximum;
};

class UnknownFixture : public Error {
public:
    explicit UnknownFixture(const std::string& name) : Error("unknown fixture '" + name + "'") {}
};

class WrongKind : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------- combings and functions

class ConeDepthExceeded : public Error {
public:
    ConeDepthExceeded(int cap, std::string reason)
        : Error("no cone depth up to " + std::to_string(cap) + " produced a valid combing: " + reason),
          cap(cap) {}
    int cap;
};

class NotAccepted : public Error {
public:
    NotAccepted(std::string word, std::size_t halt_index)
        : Error("word '" + word + "' is rejected at index " + std::to_string(halt_index)),
          halt_index(halt_index) {}
    std::size_t halt_index;
};

class OutsideVerifiedRadius : public Error {
public:
    OutsideVerifiedRadius(int length, int radius)
        : Error("length " + std::to_string(length) + " lies outside the verified radius " +
                std::to_string(radius)) {}
};

class SearchBudgetExceeded : public Error {
public:
    explicit SearchBudgetExceeded(std::size_t budget)
        : Error("realizing-path search exceeded its budget of " + std::to_string(budget) + " nodes") {}
};

// ---------------------------------------------------------------- spectral and statistics

class NotConverged : public Error {
public:
    using Error::Error;
};

class DegenerateEigenstructure : public Error {
public:
    using Error::Error;
};

class IrrationalPerronRoot : public Error {
public:
    explicit IrrationalPerronRoot(double lambda)
        : Error("exact mode needs an integral Perron root, got " + std::to_string(lambda)) {}
};

class NotAlmostSemisimple : public Error {
public:
    using Error::Error;
};

class SingularPoisson : public Error {
public:
    using Error::Error;
};

class MismatchedDigraph : public Error {
public:
    MismatchedDigraph() : Error("function digraph differs from the spectral digraph") {}
};

class DeadEnd : public Error {
public:
    explicit DeadEnd(std::size_t vertex)
        : Error("sampling reached vertex " + std::to_string(vertex + 1) +
                " which has no continuation of positive weight"),
          vertex(vertex) {}
    std::size_t vertex;
};

class TooShort : public Error {
public:
    TooShort(std::size_t have, std::size_t need)
        : Error("path of length " + std::to_string(have) + " is shorter than the required " +
                std::to_string(need)) {}
};

class NegativeVariance : public Error {
public:
    explicit NegativeVariance(double value)
        : Error("variance formula produced " + std::to_string(value)) {}
};

}  // namespace hypclt

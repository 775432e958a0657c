#pragma once

#include <stdexcept>
#include <string>

namespace cdk {

// One code per distinct failure mode named in the module contracts.
enum class Errc {
    // chess core
    MalformedFieldCount,
    IllegalPieceLetter,
    BadPlacement,
    BadSideToMove,
    BadCastling,
    BadEnPassant,
    BadClock,
    MissingKing,
    DuplicateKing,
    PawnOnBackRank,
    TooManyPawns,
    SideNotToMoveInCheck,
    BadSquare,
    BadUciMove,
    IllegalMove,
    // engine client
    SpawnFailure,
    HandshakeTimeout,
    UnsupportedOption,
    EngineCrashed,
    AnalysisTimeout,
    ProtocolParseError,
    // datasets
    MalformedRow,
    IllegalSetupMove,
    IllegalSolution,
    IoFailure,
    // sampler
    EmptyDataset,
    InsufficientPopulation,
    // prompt forge
    MissingAnalysis,
    // teacher client
    AuthFailure,
    AuthConfigMissing,
    RateLimited,
    ProviderError,
    Timeout,
    // trace validator
    NoMarker,
    UnparseableMove,
    // eval harness
    InsufficientCell,
    AbortedRun,
    // config
    ConfigParse,
    UnknownKey,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace cdk

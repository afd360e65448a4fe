#pragma once

#include <stdexcept>
#include <string>

namespace snapsim {

// Base class for every error the simulator throws on purpose.
struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// engine
struct SchedulingInPastError : SimError { using SimError::SimError; };
struct EventLimitExceededError : SimError { using SimError::SimError; };

// clocks / transport
struct BadProcessIdError : SimError { using SimError::SimError; };
struct LengthMismatchError : SimError { using SimError::SimError; };

// latency
struct InvalidParametersError : SimError { using SimError::SimError; };

// snapshots
struct AlreadyRecordedError : SimError { using SimError::SimError; };
struct DuplicateMarkerError : SimError { using SimError::SimError; };
struct MissingVectorClockError : SimError { using SimError::SimError; };
struct CalledBeforeQuiescenceError : SimError { using SimError::SimError; };

// metrics
struct MissingWindowError : SimError { using SimError::SimError; };
struct IncompleteLogError : SimError { using SimError::SimError; };
struct UnknownEventError : SimError { using SimError::SimError; };

// harness / cli
struct ConfigError : SimError { using SimError::SimError; };
struct ConsistencyViolationError : SimError { using SimError::SimError; };
struct IoError : SimError { using SimError::SimError; };

} // namespace snapsim

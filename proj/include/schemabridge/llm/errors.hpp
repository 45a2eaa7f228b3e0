#pragma once

#include "schemabridge/core/errors.hpp"

namespace schemabridge {

/// Any failure of an LLM call. The pipeline treats all of these alike.
class LlmFailure : public Error {
public:
    using Error::Error;
};

class Timeout : public LlmFailure {
public:
    using LlmFailure::LlmFailure;
};

/// The response did not satisfy the structured-output contract.
class ContractViolation : public LlmFailure {
public:
    using LlmFailure::LlmFailure;
};

class TransportError : public LlmFailure {
public:
    using LlmFailure::LlmFailure;
};

class MissingFixture : public LlmFailure {
public:
    using LlmFailure::LlmFailure;
};

} // namespace schemabridge

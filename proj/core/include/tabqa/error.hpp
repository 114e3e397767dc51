#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tabqa {

// Base of every pipeline error. `kind()` is the stable machine-readable name
// printed by the CLI error line.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define TABQA_DEFINE_ERROR(Name)                                         \
  class Name : public ::tabqa::Error {                                   \
   public:                                                               \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

// Any failure to obtain a response from a model endpoint.
class EndpointError : public Error {
 public:
  explicit EndpointError(const std::string& message) : Error("EndpointError", message) {}

 protected:
  EndpointError(std::string kind, const std::string& message) : Error(std::move(kind), message) {}
};

#define TABQA_DEFINE_ENDPOINT_ERROR(Name)                                        \
  class Name : public ::tabqa::EndpointError {                                  \
   public:                                                                      \
    explicit Name(const std::string& message) : EndpointError(#Name, message) {} \
  }

// table_model
TABQA_DEFINE_ERROR(MalformedTable);
TABQA_DEFINE_ERROR(NoMatch);
TABQA_DEFINE_ERROR(AmbiguousMatch);

// corpus_ingest
TABQA_DEFINE_ERROR(UnreadableDocument);
TABQA_DEFINE_ERROR(RenderFailure);

// dataset
TABQA_DEFINE_ERROR(MalformedGeneration);
TABQA_DEFINE_ERROR(InsufficientData);
TABQA_DEFINE_ERROR(MissingImage);

// model_gateway
TABQA_DEFINE_ENDPOINT_ERROR(Exhausted);
TABQA_DEFINE_ENDPOINT_ERROR(PermanentRejection);
TABQA_DEFINE_ENDPOINT_ERROR(OversizedPayload);

// runners
TABQA_DEFINE_ERROR(DuplicateRecord);

// evaluation
TABQA_DEFINE_ERROR(EmptyRun);
TABQA_DEFINE_ERROR(MisalignedRuns);
TABQA_DEFINE_ERROR(UndefinedGain);

// lora_math
TABQA_DEFINE_ERROR(ShapeMismatch);
TABQA_DEFINE_ERROR(NonFinite);
TABQA_DEFINE_ERROR(AdapterFormatError);

// shared plumbing
TABQA_DEFINE_ERROR(ConfigError);
TABQA_DEFINE_ERROR(IoError);

#undef TABQA_DEFINE_ERROR
#undef TABQA_DEFINE_ENDPOINT_ERROR

}  // namespace tabqa

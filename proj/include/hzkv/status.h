#pragma once

#include <string>
#include <utility>

namespace hzkv {

enum class StatusCode {
  kOk = 0,
  kZoneFull,
  kZoneNotWritable,
  kReadBeyondWritePointer,
  kStoreFull,
  kProtocolViolation,
  kNoCacheZone,
  kAborted,
  kConfigError,
  kIoError,
  kInvalidArgument,
  kNotFound,
};

class Status {
 public:
  Status() : code_(StatusCode::kOk) {}
  Status(StatusCode code, std::string msg) : code_(code), msg_(std::move(msg)) {}

  static Status OK() { return Status(); }
  static Status ZoneFull(std::string m = "") { return {StatusCode::kZoneFull, std::move(m)}; }
  static Status ZoneNotWritable(std::string m = "") { return {StatusCode::kZoneNotWritable, std::move(m)}; }
  static Status ReadBeyondWritePointer(std::string m = "") { return {StatusCode::kReadBeyondWritePointer, std::move(m)}; }
  static Status StoreFull(std::string m = "") { return {StatusCode::kStoreFull, std::move(m)}; }
  static Status ProtocolViolation(std::string m = "") { return {StatusCode::kProtocolViolation, std::move(m)}; }
  static Status NoCacheZone(std::string m = "") { return {StatusCode::kNoCacheZone, std::move(m)}; }
  static Status Aborted(std::string m = "") { return {StatusCode::kAborted, std::move(m)}; }
  static Status ConfigError(std::string m = "") { return {StatusCode::kConfigError, std::move(m)}; }
  static Status IoError(std::string m = "") { return {StatusCode::kIoError, std::move(m)}; }
  static Status InvalidArgument(std::string m = "") { return {StatusCode::kInvalidArgument, std::move(m)}; }
  static Status NotFound(std::string m = "") { return {StatusCode::kNotFound, std::move(m)}; }

  bool ok() const { return code_ == StatusCode::kOk; }
  StatusCode code() const { return code_; }
  const std::string& message() const { return msg_; }

  std::string ToString() const {
    if (ok()) return "OK";
    return std::string(CodeName(code_)) + (msg_.empty() ? "" : ": " + msg_);
  }

  static const char* CodeName(StatusCode c) {
    switch (c) {
      case StatusCode::kOk: return "OK";
      case StatusCode::kZoneFull: return "ZoneFull";
      case StatusCode::kZoneNotWritable: return "ZoneNotWritable";
      case StatusCode::kReadBeyondWritePointer: return "ReadBeyondWritePointer";
      case StatusCode::kStoreFull: return "StoreFull";
      case StatusCode::kProtocolViolation: return "ProtocolViolation";
      case StatusCode::kNoCacheZone: return "NoCacheZone";
      case StatusCode::kAborted: return "Aborted";
      case StatusCode::kConfigError: return "ConfigError";
      case StatusCode::kIoError: return "IoError";
      case StatusCode::kInvalidArgument: return "InvalidArgument";
      case StatusCode::kNotFound: return "NotFound";
    }
    return "Unknown";
  }

 private:
  StatusCode code_;
  std::string msg_;
};

}  // namespace hzkv

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace padbench {

enum class ErrorCode {
  // imaging
  FileNotFound,
  UnsupportedFormat,
  CorruptImage,
  IoError,
  SingularHomography,
  CropLargerThanSource,
  MarginTooLarge,
  // features
  ImageTooSmall,
  KeypointTooCloseToBorder,
  // geometry
  DegenerateConfiguration,
  TooFewPairs,
  NoConsensus,
  PointAtInfinity,
  // pipeline
  DegenerateQuad,
  QuadOutOfBounds,
  AlignmentFailed,
  NoPairableSubjects,
  // dataset
  InvalidManifest,
  InvalidRules,
  UnknownSubjectInRules,
  RuleCoverageGap,
  EmptyTrainSplit,
  SyntheticCountMismatch,
  MissingSyntheticFile,
  // metrics
  InvalidScoreFile,
  NoAttackRecords,
  NoBonaFideRecords,
  MissingClass,
  OutOfDomain,
  // fid
  TooFewSamples,
  NotSymmetric,
  IndefiniteMatrix,
  DimensionMismatch,
  BadMagic,
  TruncatedFile,
  DimensionZero,
  NonFiniteValue,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptImage: return "CorruptImage";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SingularHomography: return "SingularHomography";
    case ErrorCode::CropLargerThanSource: return "CropLargerThanSource";
    case ErrorCode::MarginTooLarge: return "MarginTooLarge";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::KeypointTooCloseToBorder: return "KeypointTooCloseToBorder";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::TooFewPairs: return "TooFewPairs";
    case ErrorCode::NoConsensus: return "NoConsensus";
    case ErrorCode::PointAtInfinity: return "PointAtInfinity";
    case ErrorCode::DegenerateQuad: return "DegenerateQuad";
    case ErrorCode::QuadOutOfBounds: return "QuadOutOfBounds";
    case ErrorCode::AlignmentFailed: return "AlignmentFailed";
    case ErrorCode::NoPairableSubjects: return "NoPairableSubjects";
    case ErrorCode::InvalidManifest: return "InvalidManifest";
    case ErrorCode::InvalidRules: return "InvalidRules";
    case ErrorCode::UnknownSubjectInRules: return "UnknownSubjectInRules";
    case ErrorCode::RuleCoverageGap: return "RuleCoverageGap";
    case ErrorCode::EmptyTrainSplit: return "EmptyTrainSplit";
    case ErrorCode::SyntheticCountMismatch: return "SyntheticCountMismatch";
    case ErrorCode::MissingSyntheticFile: return "MissingSyntheticFile";
    case ErrorCode::InvalidScoreFile: return "InvalidScoreFile";
    case ErrorCode::NoAttackRecords: return "NoAttackRecords";
    case ErrorCode::NoBonaFideRecords: return "NoBonaFideRecords";
    case ErrorCode::MissingClass: return "MissingClass";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::IndefiniteMatrix: return "IndefiniteMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::DimensionZero: return "DimensionZero";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
  }
  return "Unknown";
}

/// Every failure raised by the toolkit. The code identifies the error kind;
/// the message carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace padbench

/*
 * Copyright (c) 2026, the swnprior authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef SWNPRIOR_VERSION_HPP
#define SWNPRIOR_VERSION_HPP

namespace swnprior {

inline constexpr const char* kToolkitVersion = "0.1.0";

/// Version string embedded in exported feature matrices.
inline constexpr const char* kFeatureSchemaVersion = "swnprior-features-v1";

/// Schema version of serialized models; load rejects mismatches.
inline constexpr int kModelSchemaVersion = 1;

/// Schema version of evaluation report files.
inline constexpr int kReportSchemaVersion = 1;

} // namespace swnprior

#endif

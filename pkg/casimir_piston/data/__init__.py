# Copyright 2025 The casimir-piston authors.
# SPDX-License-Identifier: Apache-2.0

# Tests for asrefine

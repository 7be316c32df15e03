//! Holds the `acceptance` test target. There is no library code.

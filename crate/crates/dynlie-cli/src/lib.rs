//! Library surface of the CLI: the problem/report file schemas, shared by the
//! binary, the fixture generator and the integration tests.

pub mod schema;

pub mod analyze;
pub mod balance;
pub mod explain;
pub mod preprocess;
pub mod stream;

//! Exact series machinery and the kernel method for weighted quadrant walks.

pub mod exact_series;
pub mod walk_oracle;
pub mod linear_forms;
pub mod kernel_pipeline;

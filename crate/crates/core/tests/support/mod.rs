pub mod oracle;
pub mod transcript;

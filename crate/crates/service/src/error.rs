use actix_web::http::StatusCode;
use actix_web::{HttpResponse, ResponseError};
use serde::Serialize;
use serde_json::{json, Value};

use basketchef_core::session::{ConfigError, SessionError};
use basketchef_core::view::describe_error;
use basketchef_core::Corpus;

/// Every failure is rendered as `{"error": {"code", "message", "details"}}`.
#[derive(Debug, Clone, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    pub details: Value,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, code, message: message.into(), details: Value::Null }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }

    pub fn session_not_found(id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "session_not_found", format!("no session {id:?}"))
            .with_details(json!({ "session_id": id }))
    }

    pub fn route_not_found() -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such endpoint")
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "invalid_request", message)
    }

    pub fn unknown_item(corpus: &Corpus, name: &str) -> Self {
        let suggestions: Vec<&str> = corpus.vocabulary().prefix_matches(name).into_iter().take(10).collect();
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "unknown_item", format!("unknown item {name:?}"))
            .with_details(json!({ "item": name, "suggestions": suggestions }))
    }

    pub fn invalid_config(err: &ConfigError) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "invalid_config", err.to_string())
            .with_details(json!({ "fields": err.fields }))
    }

    pub fn session(corpus: &Corpus, err: &SessionError) -> Self {
        use SessionError as E;
        let (status, code) = match err {
            E::AlreadyInBasket(_) => (StatusCode::CONFLICT, "already_in_basket"),
            E::NotInBasket(_) => (StatusCode::CONFLICT, "not_in_basket"),
            E::UnknownItem(_) => (StatusCode::UNPROCESSABLE_ENTITY, "unknown_item"),
            E::NotInRecipe(_) => (StatusCode::UNPROCESSABLE_ENTITY, "not_in_recipe"),
            E::DuplicateAccepted(_) => (StatusCode::UNPROCESSABLE_ENTITY, "duplicate_item"),
            E::UnknownRecipe(_) => (StatusCode::UNPROCESSABLE_ENTITY, "unknown_recipe"),
            E::DishMismatch { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "dish_mismatch"),
            E::UnknownSubcategory(_) => (StatusCode::UNPROCESSABLE_ENTITY, "unknown_subcategory"),
            E::InactiveCategory(_) => (StatusCode::CONFLICT, "inactive_category"),
        };
        let item = match err {
            E::AlreadyInBasket(i) | E::NotInBasket(i) | E::NotInRecipe(i) | E::DuplicateAccepted(i) => {
                corpus.vocabulary().get(*i).map(|n| json!({ "item": n }))
            }
            _ => None,
        };
        ApiError::new(status, code, describe_error(corpus, err)).with_details(item.unwrap_or(Value::Null))
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl ResponseError for ApiError {
    fn status_code(&self) -> StatusCode {
        self.status
    }

    fn error_response(&self) -> HttpResponse {
        HttpResponse::build(self.status).json(json!({ "error": self }))
    }
}

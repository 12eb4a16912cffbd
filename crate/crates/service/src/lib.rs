//! HTTP JSON API over recommendation sessions.
//!
//! | method | path | body |
//! |---|---|---|
//! | GET | `/corpus` | |
//! | POST | `/sessions` | optional config overrides |
//! | GET | `/sessions/{id}` | |
//! | DELETE | `/sessions/{id}` | |
//! | POST | `/sessions/{id}/items` | `{"item": "..."}` |
//! | DELETE | `/sessions/{id}/items/{item}` | |
//! | POST | `/sessions/{id}/select` | `{"dish", "recipe_id", "accepted_items"}` |
//! | GET | `/sessions/{id}/recommendations` | |

mod error;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use actix_web::{web, HttpResponse, HttpServer};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use basketchef_core::session::{ConfigError, ConfigOverrides, FieldError};
use basketchef_core::view::{CorpusSummary, EventView, RecommendationsView, StateView};
use basketchef_core::{normalize_item_name, Engine, EventReport, ItemId, Session, SessionConfig};

pub use error::ApiError;

pub const DEFAULT_IDLE_TIMEOUT: Duration = Duration::from_secs(30 * 60);

struct Entry {
    session: Arc<Mutex<Session>>,
    last_seen: Instant,
}

#[derive(Default)]
struct Store {
    issued: u64,
    entries: HashMap<String, Entry>,
}

/// Shared server state: the engine, default session config and live sessions.
pub struct AppState {
    engine: Arc<Engine>,
    defaults: SessionConfig,
    idle_timeout: Duration,
    store: Mutex<Store>,
}

impl AppState {
    pub fn new(engine: Arc<Engine>, defaults: SessionConfig) -> Self {
        AppState { engine, defaults, idle_timeout: DEFAULT_IDLE_TIMEOUT, store: Mutex::default() }
    }

    pub fn with_idle_timeout(mut self, idle_timeout: Duration) -> Self {
        self.idle_timeout = idle_timeout;
        self
    }

    pub fn engine(&self) -> &Arc<Engine> {
        &self.engine
    }

    pub fn session_count(&self) -> usize {
        let mut store = self.store.lock().unwrap();
        self.evict(&mut store);
        store.entries.len()
    }

    fn evict(&self, store: &mut Store) {
        let timeout = self.idle_timeout;
        store.entries.retain(|_, e| e.last_seen.elapsed() < timeout);
    }

    /// Ids are sequential so a replayed request sequence yields identical bodies.
    fn create(&self, config: SessionConfig) -> Result<String, ConfigError> {
        let session = Session::new(self.engine.clone(), config)?;
        let mut store = self.store.lock().unwrap();
        self.evict(&mut store);
        store.issued += 1;
        let id = format!("s-{:08}", store.issued);
        store.entries.insert(id.clone(), Entry { session: Arc::new(Mutex::new(session)), last_seen: Instant::now() });
        Ok(id)
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        let mut store = self.store.lock().unwrap();
        self.evict(&mut store);
        let entry = store.entries.get_mut(id).ok_or_else(|| ApiError::session_not_found(id))?;
        entry.last_seen = Instant::now();
        Ok(entry.session.clone())
    }

    fn remove(&self, id: &str) -> Result<(), ApiError> {
        let mut store = self.store.lock().unwrap();
        self.evict(&mut store);
        store.entries.remove(id).map(drop).ok_or_else(|| ApiError::session_not_found(id))
    }

    fn item(&self, raw: &str) -> Result<ItemId, ApiError> {
        let name = normalize_item_name(raw).map_err(|_| ApiError::bad_request("item name is empty"))?;
        self.engine.corpus().vocabulary().id(&name).ok_or_else(|| ApiError::unknown_item(self.engine.corpus(), &name))
    }
}

#[derive(Debug, Serialize)]
struct SessionBody {
    session_id: String,
    config: SessionConfig,
    state: StateView,
}

#[derive(Debug, Serialize)]
struct MutationBody {
    event: EventView,
    state: StateView,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AddItem {
    item: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Select {
    dish: String,
    recipe_id: String,
    #[serde(default)]
    accepted_items: Vec<String>,
}

type Data = web::Data<AppState>;

/// Parses override fields one at a time so errors name the offending field.
fn parse_overrides(body: &[u8]) -> Result<ConfigOverrides, ApiError> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(ConfigOverrides::default());
    }
    let value: Value = serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid JSON: {e}")))?;
    let Value::Object(map) = value else {
        return Err(ApiError::bad_request("session config must be a JSON object"));
    };
    let known = ["k", "h", "q", "n", "theta", "top_n"];
    let mut fields = Vec::new();
    let mut accepted = Map::new();
    for (key, v) in map {
        match known.iter().find(|k| **k == key) {
            None => fields.push(FieldError { field: "config", message: format!("has unknown field {key:?}") }),
            Some(&field) => {
                let single = json!({ field: v });
                match serde_json::from_value::<ConfigOverrides>(single) {
                    Ok(_) => {
                        accepted.insert(key, v);
                    }
                    Err(_) => fields.push(FieldError { field, message: format!("has an invalid value {v}") }),
                }
            }
        }
    }
    if !fields.is_empty() {
        return Err(ApiError::invalid_config(&ConfigError { fields }));
    }
    Ok(serde_json::from_value(Value::Object(accepted)).expect("fields validated individually"))
}

fn mutation(engine: &Engine, session: &Session, report: &EventReport) -> HttpResponse {
    HttpResponse::Ok()
        .json(MutationBody { event: EventView::of(engine.corpus(), report), state: StateView::of(session) })
}

async fn corpus(data: Data) -> HttpResponse {
    HttpResponse::Ok().json(CorpusSummary::of(&data.engine, &data.defaults))
}

async fn create_session(data: Data, body: web::Bytes) -> Result<HttpResponse, ApiError> {
    let overrides = parse_overrides(&body)?;
    let config = data.defaults.with_overrides(&overrides).map_err(|e| ApiError::invalid_config(&e))?;
    let id = data.create(config).map_err(|e| ApiError::invalid_config(&e))?;
    let session = data.get(&id)?;
    let session = session.lock().unwrap();
    Ok(HttpResponse::Created().json(SessionBody { session_id: id, config, state: StateView::of(&session) }))
}

async fn get_session(data: Data, id: web::Path<String>) -> Result<HttpResponse, ApiError> {
    let session = data.get(&id)?;
    let session = session.lock().unwrap();
    Ok(HttpResponse::Ok().json(SessionBody {
        session_id: id.into_inner(),
        config: *session.config(),
        state: StateView::of(&session),
    }))
}

async fn delete_session(data: Data, id: web::Path<String>) -> Result<HttpResponse, ApiError> {
    data.remove(&id)?;
    Ok(HttpResponse::NoContent().finish())
}

async fn add_item(data: Data, id: web::Path<String>, body: web::Json<AddItem>) -> Result<HttpResponse, ApiError> {
    let session = data.get(&id)?;
    let item = data.item(&body.item)?;
    let mut session = session.lock().unwrap();
    let report = session.add_item(item).map_err(|e| ApiError::session(data.engine.corpus(), &e))?;
    Ok(mutation(&data.engine, &session, &report))
}

async fn remove_item(data: Data, path: web::Path<(String, String)>) -> Result<HttpResponse, ApiError> {
    let (id, name) = path.into_inner();
    let session = data.get(&id)?;
    let item = data.item(&name)?;
    let mut session = session.lock().unwrap();
    let report = session.remove_item(item).map_err(|e| ApiError::session(data.engine.corpus(), &e))?;
    Ok(mutation(&data.engine, &session, &report))
}

async fn select(data: Data, id: web::Path<String>, body: web::Json<Select>) -> Result<HttpResponse, ApiError> {
    let session = data.get(&id)?;
    let items = body.accepted_items.iter().map(|raw| data.item(raw)).collect::<Result<Vec<_>, _>>()?;
    let mut session = session.lock().unwrap();
    let report = session
        .select_dish(&body.dish, &body.recipe_id, &items)
        .map_err(|e| ApiError::session(data.engine.corpus(), &e))?;
    Ok(mutation(&data.engine, &session, &report))
}

async fn recommendations(data: Data, id: web::Path<String>) -> Result<HttpResponse, ApiError> {
    let session = data.get(&id)?;
    let session = session.lock().unwrap();
    Ok(HttpResponse::Ok().json(RecommendationsView::of(data.engine.corpus(), &session.recommend())))
}

async fn not_found() -> Result<HttpResponse, ApiError> {
    Err(ApiError::route_not_found())
}

/// Registers the routes and JSON error handling. The caller registers a
/// `web::Data<AppState>` as app data.
pub fn configure(cfg: &mut web::ServiceConfig) {
    let json = web::JsonConfig::default()
        .error_handler(|err, _| ApiError::bad_request(format!("invalid request body: {err}")).into());
    let path = web::PathConfig::default().error_handler(|err, _| ApiError::bad_request(err.to_string()).into());
    cfg.app_data(json)
        .app_data(path)
        .route("/corpus", web::get().to(corpus))
        .route("/sessions", web::post().to(create_session))
        .route("/sessions/{id}", web::get().to(get_session))
        .route("/sessions/{id}", web::delete().to(delete_session))
        .route("/sessions/{id}/items", web::post().to(add_item))
        .route("/sessions/{id}/items/{item}", web::delete().to(remove_item))
        .route("/sessions/{id}/select", web::post().to(select))
        .route("/sessions/{id}/recommendations", web::get().to(recommendations))
        .default_service(web::to(not_found));
}

/// Binds `addr`, reports the bound address, then serves until shutdown.
/// Bind failures (such as a port already in use) are returned before serving.
pub fn serve(state: AppState, addr: SocketAddr, on_bound: impl FnOnce(SocketAddr)) -> std::io::Result<()> {
    let data = web::Data::new(state);
    actix_web::rt::System::new().block_on(async move {
        let server =
            HttpServer::new(move || actix_web::App::new().app_data(data.clone()).configure(configure)).bind(addr)?;
        if let Some(bound) = server.addrs().first() {
            on_bound(*bound);
        }
        server.run().await
    })
}

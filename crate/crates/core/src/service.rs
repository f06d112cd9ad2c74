//! HTTP/JSON facade over the store and the analyses.
//!
//! Response bodies are the compact JSON serialization of the library results,
//! so a client sees exactly what the corresponding library call returns.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{FromRequest, Path, Query, Request, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::Router;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use crate::error::{Error, Result};
use crate::graph::{build_call_graph, export_graph, sequence_stack_rows, GraphFormat, Granularity};
use crate::ingestion::*;
use crate::metrics::*;
use crate::model::*;
use crate::search::{search_breakpoints, SearchMode, SearchQuery};
use crate::store::{QueryFilter, Store, StoreSnapshot};

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<Store>,
    pub project_root: Option<PathBuf>,
}

/// Error body: `{"code": ..., "message": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: u16,
    pub code: String,
    pub message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError { status: status.as_u16(), code: code.to_owned(), message: message.into() }
    }
}

/// HTTP status for a library error.
pub fn status_for(err: &Error) -> StatusCode {
    use Error::*;
    match err {
        UnknownProduct(_) | UnknownTask(_) | UnknownSession(_) | UnknownType(_) | UnknownDeveloper(_) => {
            StatusCode::NOT_FOUND
        }
        SessionClosed(_) | AlreadyClosed(_) | SessionOpen(_) | Duplicate(_) => StatusCode::CONFLICT,
        UnreadableStream(_) => StatusCode::BAD_REQUEST,
        CorruptStore { .. } | Io(_) | Json(_) | Csv(_) => StatusCode::INTERNAL_SERVER_ERROR,
        _ => StatusCode::UNPROCESSABLE_ENTITY,
    }
}

impl From<Error> for ApiError {
    fn from(err: Error) -> Self {
        ApiError::new(status_for(&err), err.code(), err.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        json_response(status, &self)
    }
}

type ApiResult = std::result::Result<Response, ApiError>;

fn json_response<T: Serialize>(status: StatusCode, value: &T) -> Response {
    match serde_json::to_vec(value) {
        Ok(body) => (status, [(header::CONTENT_TYPE, "application/json")], body).into_response(),
        Err(e) => (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
    }
}

fn ok<T: Serialize>(value: &T) -> ApiResult {
    Ok(json_response(StatusCode::OK, value))
}

fn created<T: Serialize>(value: &T) -> ApiResult {
    Ok(json_response(StatusCode::CREATED, value))
}

/// JSON body extractor answering 400 for unparsable JSON and 422 for JSON
/// that does not fit the expected shape.
pub struct ApiJson<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequest<S> for ApiJson<T> {
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> std::result::Result<Self, ApiError> {
        let bytes = Bytes::from_request(req, state)
            .await
            .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "MalformedJson", e.body_text()))?;
        let mut de = serde_json::Deserializer::from_slice(&bytes);
        match T::deserialize(&mut de).and_then(|v| de.end().map(|_| v)) {
            Ok(v) => Ok(ApiJson(v)),
            Err(e) if e.is_data() => Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "Invalid", e.to_string())),
            Err(e) => Err(ApiError::new(StatusCode::BAD_REQUEST, "MalformedJson", e.to_string())),
        }
    }
}

/// Query-string extractor answering 400 on malformed parameters.
pub struct ApiQuery<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> axum::extract::FromRequestParts<S> for ApiQuery<T> {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut axum::http::request::Parts, state: &S) -> std::result::Result<Self, ApiError> {
        Query::<T>::from_request_parts(parts, state)
            .await
            .map(|Query(v)| ApiQuery(v))
            .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "BadQuery", e.body_text()))
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/products", post(create_product))
        .route("/api/products/{id}/tasks", post(create_task))
        .route("/api/products/{id}/types", post(declare_type))
        .route("/api/products/{id}/globalview", get(globalview))
        .route("/api/products/{id}/recommendations", get(recommendations))
        .route("/api/products/{id}/hotspots", get(hotspots))
        .route("/api/products/{id}/colocated", get(colocated))
        .route("/api/products/{id}/classes", get(classes))
        .route("/api/sessions", post(open_session))
        .route("/api/sessions/{id}/close", put(close_session))
        .route("/api/sessions/{id}/breakpoints", post(add_breakpoint))
        .route("/api/sessions/{id}/events", post(add_event))
        .route("/api/sessions/{id}/invocations", post(add_invocation))
        .route("/api/sessions/{id}/metrics", get(session_metrics_route))
        .route("/api/sessions/{id}/sequence-rows", get(sequence_rows))
        .route("/api/logs", post(import_log))
        .route("/api/developers/search/findByName", get(find_developer))
        .route("/api/breakpoints/search", get(search))
        .route("/api/types/{id}", get(type_view_route))
        .fallback(|| async { ApiError::new(StatusCode::NOT_FOUND, "NotFound", "no such route") })
        .layer(CorsLayer::permissive())
        .with_state(state)
}

/// Binds and serves until Ctrl-C.
pub async fn serve(state: AppState, addr: SocketAddr) -> Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NewProduct {
    name: String,
}

async fn create_product(State(st): State<AppState>, ApiJson(body): ApiJson<NewProduct>) -> ApiResult {
    created(&st.store.create_product(&body.name)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NewTask {
    issue_key: String,
    #[serde(default)]
    title: String,
}

async fn create_task(State(st): State<AppState>, Path(product): Path<String>, ApiJson(body): ApiJson<NewTask>) -> ApiResult {
    created(&st.store.create_task(&product, &body.issue_key, &body.title)?)
}

async fn declare_type(
    State(st): State<AppState>,
    Path(product): Path<String>,
    ApiJson(body): ApiJson<TypeDeclaration>,
) -> ApiResult {
    created(&st.store.declare_type(&product, &body)?)
}

async fn open_session(State(st): State<AppState>, ApiJson(body): ApiJson<OpenSession>) -> ApiResult {
    created(&st.store.open_session(&body)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CloseRequest {
    pub outcome: SessionOutcome,
    #[serde(default)]
    pub finished_at: Option<Timestamp>,
}

async fn close_session(State(st): State<AppState>, Path(id): Path<String>, ApiJson(body): ApiJson<CloseRequest>) -> ApiResult {
    ok(&st.store.close_session(&SessionId::from(id), body.outcome, body.finished_at)?)
}

async fn add_breakpoint(State(st): State<AppState>, Path(id): Path<String>, ApiJson(body): ApiJson<NewBreakpoint>) -> ApiResult {
    created(&st.store.record_breakpoint(&SessionId::from(id), &body)?)
}

async fn add_event(State(st): State<AppState>, Path(id): Path<String>, ApiJson(body): ApiJson<NewEvent>) -> ApiResult {
    created(&st.store.record_event(&SessionId::from(id), &body)?)
}

async fn add_invocation(State(st): State<AppState>, Path(id): Path<String>, ApiJson(body): ApiJson<NewInvocation>) -> ApiResult {
    match st.store.record_invocation(&SessionId::from(id), &body)? {
        Some(inv) => created(&Some(inv)),
        None => ok(&None::<Invocation>),
    }
}

async fn import_log(State(st): State<AppState>, body: Bytes) -> ApiResult {
    ok(&st.store.import_session_log(&body[..])?)
}

#[derive(Deserialize)]
struct NameQuery {
    name: String,
}

async fn find_developer(State(st): State<AppState>, ApiQuery(q): ApiQuery<NameQuery>) -> ApiResult {
    ok(&st.store.snapshot().find_developer_by_name(&q.name))
}

#[derive(Deserialize)]
pub struct SearchParams {
    pub q: String,
    #[serde(default)]
    pub mode: Option<String>,
    #[serde(default)]
    pub product: Option<String>,
}

/// Library query behind `GET /api/breakpoints/search`.
pub fn search_query(snapshot: &StoreSnapshot, p: &SearchParams) -> Result<SearchQuery> {
    let mode = match &p.mode {
        Some(m) => m.parse()?,
        None => SearchMode::Fuzzy,
    };
    let mut query = SearchQuery::new(&p.q, mode);
    if let Some(product) = &p.product {
        query.filter = QueryFilter::product(product_id(snapshot, product)?);
    }
    Ok(query)
}

async fn search(State(st): State<AppState>, ApiQuery(p): ApiQuery<SearchParams>) -> ApiResult {
    let snap = st.store.snapshot();
    let query = search_query(&snap, &p)?;
    ok(&search_breakpoints(&snap, &query)?)
}

fn product_id(snapshot: &StoreSnapshot, id_or_name: &str) -> Result<ProductId> {
    snapshot
        .resolve_product(id_or_name)
        .map(|p| p.id.clone())
        .ok_or_else(|| Error::UnknownProduct(id_or_name.to_owned()))
}

/// Product filter narrowed to comma-separated issue keys; empty or `all`
/// keeps every task.
pub fn task_filter(snapshot: &StoreSnapshot, product: &str, tasks: Option<&str>) -> Result<QueryFilter> {
    let pid = product_id(snapshot, product)?;
    let mut filter = QueryFilter::product(pid.clone());
    let keys = tasks.unwrap_or("").trim();
    if keys.is_empty() || keys == "all" {
        return Ok(filter);
    }
    for key in keys.split(',').map(str::trim).filter(|k| !k.is_empty()) {
        let task = snapshot.task_by_key(&pid, key).ok_or_else(|| Error::UnknownTask(key.to_owned()))?;
        filter.task_ids.insert(task.id.clone());
    }
    Ok(filter)
}

#[derive(Deserialize)]
pub struct GraphParams {
    #[serde(default)]
    pub tasks: Option<String>,
    #[serde(default)]
    pub granularity: Option<String>,
    #[serde(default)]
    pub format: Option<String>,
}

async fn globalview(State(st): State<AppState>, Path(product): Path<String>, ApiQuery(p): ApiQuery<GraphParams>) -> ApiResult {
    let snap = st.store.snapshot();
    let filter = task_filter(&snap, &product, p.tasks.as_deref())?;
    let granularity: Granularity = p.granularity.as_deref().unwrap_or("type").parse()?;
    let format: GraphFormat = p.format.as_deref().unwrap_or("gvjson").parse()?;
    let body = export_graph(&build_call_graph(&snap, &filter, granularity), format);
    let content_type = match format {
        GraphFormat::Gvjson => "application/json",
        GraphFormat::Dot => "text/vnd.graphviz",
    };
    Ok((StatusCode::OK, [(header::CONTENT_TYPE, content_type)], body).into_response())
}

#[derive(Deserialize)]
struct RecommendParams {
    #[serde(default)]
    k: Option<usize>,
    #[serde(default)]
    session: Option<String>,
}

async fn recommendations(
    State(st): State<AppState>,
    Path(product): Path<String>,
    ApiQuery(p): ApiQuery<RecommendParams>,
) -> ApiResult {
    let snap = st.store.snapshot();
    let pid = product_id(&snap, &product)?;
    let k = p.k.unwrap_or(10);
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()).into());
    }
    let session = p.session.map(SessionId::from);
    if let Some(s) = &session {
        crate::store::require_session(&snap, s)?;
    }
    ok(&recommend_breakpoints(&snap, &pid, session.as_ref(), k))
}

#[derive(Deserialize)]
struct HotspotParams {
    #[serde(default)]
    min: Option<usize>,
    #[serde(default)]
    tasks: Option<String>,
}

async fn hotspots(State(st): State<AppState>, Path(product): Path<String>, ApiQuery(p): ApiQuery<HotspotParams>) -> ApiResult {
    let snap = st.store.snapshot();
    let filter = task_filter(&snap, &product, p.tasks.as_deref())?;
    ok(&method_hotspots(&snap, &filter, p.min.unwrap_or(5)))
}

#[derive(Deserialize)]
struct ColocatedParams {
    #[serde(default)]
    mode: Option<String>,
    #[serde(default)]
    tasks: Option<String>,
}

async fn colocated(State(st): State<AppState>, Path(product): Path<String>, ApiQuery(p): ApiQuery<ColocatedParams>) -> ApiResult {
    let snap = st.store.snapshot();
    let filter = task_filter(&snap, &product, p.tasks.as_deref())?;
    let mode: ColocationMode = p.mode.as_deref().unwrap_or("same_task").parse()?;
    ok(&colocated_breakpoints(&snap, &filter, mode))
}

async fn classes(State(st): State<AppState>, Path(product): Path<String>, ApiQuery(p): ApiQuery<ColocatedParams>) -> ApiResult {
    let snap = st.store.snapshot();
    let filter = task_filter(&snap, &product, p.tasks.as_deref())?;
    ok(&class_task_matrix(&snap, &filter))
}

async fn session_metrics_route(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult {
    ok(&session_metrics(&st.store.snapshot(), &SessionId::from(id))?)
}

async fn sequence_rows(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult {
    ok(&sequence_stack_rows(&st.store.snapshot(), &SessionId::from(id))?)
}

/// What the Global View shows when a node is opened.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeView {
    #[serde(rename = "type")]
    pub ty: TypeEntity,
    pub namespace: Option<String>,
    pub methods: Vec<MethodEntity>,
    pub breakpoints: usize,
    /// Breakpointed lines of this type across the product, busiest first.
    pub hot_lines: Vec<HotSpot>,
    /// File contents, when a project root is configured and the file exists.
    pub source: Option<String>,
}

pub fn type_view(snapshot: &StoreSnapshot, id: &TypeId, project_root: Option<&std::path::Path>) -> Result<TypeView> {
    let ty = snapshot.type_entity(id).ok_or_else(|| Error::UnknownType(id.to_string()))?.clone();
    let mut methods: Vec<MethodEntity> = snapshot.methods_of_type(id).cloned().collect();
    methods.sort_by(|a, b| (a.declared_line, &a.signature).cmp(&(b.declared_line, &b.signature)));
    let mut hot_lines: Vec<HotSpot> = line_hotspots(snapshot, &QueryFilter::product(ty.product_id.clone()))
        .into_iter()
        .filter(|h| h.type_full_name == ty.full_name)
        .collect();
    hot_lines.sort_by(recommendation_order);
    Ok(TypeView {
        namespace: snapshot.namespace(&ty.namespace_id).map(|n| n.full_name.clone()),
        methods,
        breakpoints: snapshot.breakpoints().filter(|b| b.type_id == *id).count(),
        hot_lines,
        source: project_root.and_then(|r| std::fs::read_to_string(r.join(&ty.source_path)).ok()),
        ty,
    })
}

async fn type_view_route(State(st): State<AppState>, Path(id): Path<String>) -> ApiResult {
    ok(&type_view(&st.store.snapshot(), &TypeId::from(id), st.project_root.as_deref())?)
}
